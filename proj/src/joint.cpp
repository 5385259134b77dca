#include "precmon/joint.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>

#include "precmon/errors.hpp"

namespace precmon {

namespace {

// Belief-tree node identity: stage, node kind, and the bit patterns of the
// beliefs that still matter (entries t..n).
std::string node_key(std::size_t t, char kind, std::span<const double> b) {
    std::string key(sizeof(std::uint32_t) + 1 + sizeof(double) * (b.size() - (t - 1)), '\0');
    const auto stage = static_cast<std::uint32_t>(t);
    std::memcpy(key.data(), &stage, sizeof stage);
    key[sizeof stage] = kind;
    std::memcpy(key.data() + sizeof stage + 1, b.data() + (t - 1), sizeof(double) * (b.size() - (t - 1)));
    return key;
}

// Enumerates the joint reports for the monitored set, skipping reports with
// zero probability. `visit(prob, posterior)` is called once per report.
template <typename Visit>
void for_each_report(const MonitoringInstance& inst, const std::vector<double>& b,
                     const std::vector<std::size_t>& monitored, Visit&& visit) {
    const std::size_t m = monitored.size();
    std::vector<double> post;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        double prob = 1.0;
        for (std::size_t i = 0; i < m && prob > 0.0; ++i) {
            const auto r = (mask >> i) & 1 ? Report::failed : Report::holds;
            const std::size_t k = monitored[i];
            prob *= report_likelihood(b[k - 1], inst.stage(k).sensor, r);
        }
        if (prob == 0.0) continue;
        post = b;
        for (std::size_t i = 0; i < m; ++i) {
            const auto r = (mask >> i) & 1 ? Report::failed : Report::holds;
            const std::size_t k = monitored[i];
            post[k - 1] = observe_update(post[k - 1], inst.stage(k).sensor, r);
        }
        visit(prob, post);
    }
}

void advance(std::vector<double>& b, std::size_t t, const MonitoringInstance& inst) {
    for (std::size_t k = t + 1; k <= b.size(); ++k)
        b[k - 1] = transition_update(b[k - 1], inst.stage(k).transition);
}

void check_belief(const MonitoringInstance& inst, const FactoredBelief& b, std::size_t t) {
    if (b.size() != inst.size())
        throw ContractError("belief has " + std::to_string(b.size()) + " entries, expected " +
                            std::to_string(inst.size()));
    if (t < 1 || t > inst.size())
        throw ContractError("stage " + std::to_string(t) + " outside [1," +
                            std::to_string(inst.size()) + "]");
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = cursor++; i < count && !failed; i = cursor++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

// ---------------------------------------------------------------------------

struct JointOracle::Memo {
    std::unordered_map<std::string, double> monitoring;
};

JointOracle::JointOracle(const MonitoringInstance& inst, std::size_t depth_guard)
    : inst_(inst), depth_guard_(depth_guard), memo_(std::make_shared<Memo>()) {}

std::size_t JointOracle::memo_size() const noexcept { return memo_->monitoring.size(); }

void JointOracle::check_horizon(std::size_t t) const {
    const std::size_t horizon = inst_.size() - t + 1;
    if (horizon > depth_guard_)
        throw RefusalError("oracle horizon " + std::to_string(horizon) + " exceeds depth guard " +
                               std::to_string(depth_guard_) + " (raise --depth-guard)",
                           "--depth-guard");
}

double JointOracle::monitoring_value(const FactoredBelief& b, std::size_t t) {
    check_belief(inst_, b, t);
    check_horizon(t);
    std::vector<double> probs(b.probs().begin(), b.probs().end());
    return monitoring(probs, t);
}

ActionStageValues JointOracle::action_values(const FactoredBelief& b, std::size_t t) {
    check_belief(inst_, b, t);
    check_horizon(t);
    return action(std::vector<double>(b.probs().begin(), b.probs().end()), t);
}

double JointOracle::monitoring(const std::vector<double>& b, std::size_t t) {
    auto key = node_key(t, 'm', b);
    if (auto hit = memo_->monitoring.find(key); hit != memo_->monitoring.end()) return hit->second;

    // Reporting on a precondition whose status is certain leaves every
    // posterior unchanged, so such subsets are never better than omitting it.
    std::vector<std::size_t> uncertain;
    for (std::size_t k = t; k <= b.size(); ++k)
        if (b[k - 1] > 0.0 && b[k - 1] < 1.0) uncertain.push_back(k);

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> monitored;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << uncertain.size()); ++subset) {
        monitored.clear();
        double cost = 0.0;
        for (std::size_t i = 0; i < uncertain.size(); ++i) {
            if ((subset >> i) & 1) {
                monitored.push_back(uncertain[i]);
                cost += inst_.stage(uncertain[i]).monitor_cost;
            }
        }
        double expected = 0.0;
        for_each_report(inst_, b, monitored, [&](double prob, const std::vector<double>& post) {
            expected += prob * action(post, t).best();
        });
        best = std::max(best, expected - cost);
    }
    memo_->monitoring.emplace(std::move(key), best);
    return best;
}

ActionStageValues JointOracle::action(const std::vector<double>& b, std::size_t t) {
    const StageSpec& stage = inst_.stage(t);
    const double holds = b[t - 1];
    ActionStageValues out;
    out.abandon = stage.alt_value;
    if (t == inst_.size()) {
        out.cont = holds * inst_.plan_value + (1.0 - holds) * stage.fail_value;
        return out;
    }
    double success = 0.0;
    if (holds > 0.0) {
        std::vector<double> next = b;
        advance(next, t, inst_);
        success = monitoring(next, t + 1);
    }
    out.cont = holds * success + (1.0 - holds) * stage.fail_value;
    return out;
}

double oracle_value(const MonitoringInstance& inst, const FactoredBelief& b, std::size_t t,
                    std::size_t depth_guard) {
    JointOracle oracle(inst, depth_guard);
    return oracle.monitoring_value(b, t);
}

// ---------------------------------------------------------------------------

struct PolicyEvaluator::Memo {
    std::unordered_map<std::string, double> monitoring;
};

PolicyEvaluator::PolicyEvaluator(const PolicyBundle& bundle, Combiner combiner,
                                 std::uint64_t node_budget)
    : bundle_(bundle), combiner_(combiner), budget_(node_budget), memo_(std::make_shared<Memo>()) {}

void PolicyEvaluator::charge() {
    if (++nodes_ > budget_)
        throw RefusalError("policy evaluation exceeded node budget " + std::to_string(budget_) +
                               " (raise --node-budget)",
                           "--node-budget");
}

double PolicyEvaluator::value(const FactoredBelief& b, std::size_t t) {
    check_belief(bundle_.instance, b, t);
    return monitoring(b, t);
}

double PolicyEvaluator::monitoring(const FactoredBelief& b, std::size_t t) {
    auto key = node_key(t, 'm', b.probs());
    if (auto hit = memo_->monitoring.find(key); hit != memo_->monitoring.end()) return hit->second;
    charge();

    const auto& inst = bundle_.instance;
    const auto monitored = npc_monitor(bundle_, b, t);
    double cost = 0.0;
    for (std::size_t k : monitored) cost += inst.stage(k).monitor_cost;

    const std::vector<double> probs(b.probs().begin(), b.probs().end());
    double expected = 0.0;
    for_each_report(inst, probs, monitored, [&](double prob, const std::vector<double>& post) {
        expected += prob * action(FactoredBelief(post), t);
    });
    const double v = expected - cost;
    memo_->monitoring.emplace(std::move(key), v);
    return v;
}

double PolicyEvaluator::action(const FactoredBelief& b, std::size_t t) {
    charge();
    const auto& inst = bundle_.instance;
    const StageSpec& stage = inst.stage(t);
    if (decide(bundle_, b, t, combiner_).action == Action::abandon) return stage.alt_value;

    const double holds = b[t];
    if (t == inst.size()) return holds * inst.plan_value + (1.0 - holds) * stage.fail_value;
    double success = 0.0;
    if (holds > 0.0) {
        FactoredBelief next = b;
        next.advance_past(t, inst);
        success = monitoring(next, t + 1);
    }
    return holds * success + (1.0 - holds) * stage.fail_value;
}

double evaluate_policy_exact(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                             Combiner combiner, std::uint64_t node_budget) {
    PolicyEvaluator eval(bundle, combiner, node_budget);
    return eval.value(b, t);
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kEpisodesPerBatch = 4096;

struct BatchStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    // Chan et al. pairwise combination.
    void merge(const BatchStats& o) noexcept {
        if (o.count == 0) return;
        const double total = static_cast<double>(count + o.count);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.count) / total;
        m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
        count += o.count;
    }
};

EpisodeOutcome run_episode(const PolicyBundle& bundle, const FactoredBelief& start,
                           Combiner combiner, std::mt19937_64& rng) {
    const auto& inst = bundle.instance;
    const std::size_t n = inst.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<bool> ok(n);
    for (std::size_t k = 1; k <= n; ++k) ok[k - 1] = unit(rng) < start[k];

    EpisodeOutcome out;
    FactoredBelief belief = start;
    for (std::size_t t = 1; t <= n; ++t) {
        const auto step = run_step(bundle, belief, t, combiner, [&](std::size_t k) {
            out.monitoring_paid += inst.stage(k).monitor_cost;
            const auto& s = inst.stage(k).sensor;
            const double p_holds_report = ok[k - 1] ? 1.0 - s.false_negative : s.false_positive;
            return unit(rng) < p_holds_report ? Report::holds : Report::failed;
        });
        belief = step.posterior;
        out.stage = t;
        if (step.object_action == Action::abandon) {
            out.terminal = Terminal::abandoned;
            out.terminal_value = inst.stage(t).alt_value;
            return out;
        }
        if (!ok[t - 1]) {
            out.terminal = Terminal::failed;
            out.terminal_value = inst.stage(t).fail_value;
            return out;
        }
        for (std::size_t k = t + 1; k <= n; ++k) {
            const auto& tr = inst.stage(k).transition;
            ok[k - 1] = ok[k - 1] ? unit(rng) >= tr.p_fail : unit(rng) < tr.p_repair;
        }
        belief.advance_past(t, inst);
    }
    out.terminal = Terminal::completed;
    out.terminal_value = inst.plan_value;
    return out;
}

}  // namespace

SimulationResult simulate(const PolicyBundle& bundle, const FactoredBelief& b, Combiner combiner,
                          std::uint64_t episodes, std::uint64_t seed, unsigned threads) {
    if (episodes == 0) throw ContractError("simulate: episodes must be positive");
    check_belief(bundle.instance, b, 1);

    const std::uint64_t batches = (episodes + kEpisodesPerBatch - 1) / kEpisodesPerBatch;
    std::vector<BatchStats> stats(batches);
    parallel_for(batches, threads, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(seq);
        const std::uint64_t lo = i * kEpisodesPerBatch;
        const std::uint64_t hi = std::min(episodes, lo + kEpisodesPerBatch);
        for (std::uint64_t e = lo; e < hi; ++e) stats[i].add(run_episode(bundle, b, combiner, rng).net_value());
    });

    BatchStats total;
    for (const auto& s : stats) total.merge(s);
    SimulationResult out;
    out.episodes = total.count;
    out.mean = total.mean;
    if (total.count > 1) {
        const double var = total.m2 / static_cast<double>(total.count - 1);
        out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(total.count));
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_levels(std::size_t count) {
    if (count < 2) throw InputError("a uniform grid needs at least 2 levels");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

std::vector<FactoredBelief> belief_grid(std::size_t n, const std::vector<double>& levels) {
    if (n == 0) throw ContractError("belief_grid: n must be positive");
    if (levels.empty()) throw InputError("belief grid needs at least one level");
    for (double l : levels)
        if (!(l >= 0.0 && l <= 1.0)) throw InputError("belief grid level outside [0,1]");

    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= levels.size();
    std::vector<FactoredBelief> out;
    out.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> probs(n);
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t i = 0; i < n; ++i) probs[i] = levels[idx[i]];
        out.emplace_back(probs);
        for (std::size_t i = n; i-- > 0;) {
            if (++idx[i] < levels.size()) break;
            idx[i] = 0;
        }
    }
    return out;
}

Aggregate aggregate(const std::vector<const EvaluationPoint*>& points) {
    Aggregate a;
    a.count = points.size();
    CompensatedSum err_npc, err_vapc, improvement, diff;
    std::size_t with_err = 0, with_improvement = 0;
    for (const auto* p : points) {
        if (p->rel_err_npc && p->rel_err_vapc) {
            ++with_err;
            err_npc.add(*p->rel_err_npc);
            err_vapc.add(*p->rel_err_vapc);
            a.max_rel_err_npc = std::max(a.max_rel_err_npc, *p->rel_err_npc);
            a.max_rel_err_vapc = std::max(a.max_rel_err_vapc, *p->rel_err_vapc);
        } else if (p->oracle_value) {
            ++a.excluded;
        }
        if (p->npc_value > 0.0) {
            ++with_improvement;
            const double imp = (p->vapc_value - p->npc_value) / p->npc_value;
            improvement.add(imp);
            a.max_improvement = with_improvement == 1 ? imp : std::max(a.max_improvement, imp);
        }
        diff.add(p->vapc_value - p->npc_value);
    }
    if (with_err) {
        a.mean_rel_err_npc = err_npc.value() / static_cast<double>(with_err);
        a.mean_rel_err_vapc = err_vapc.value() / static_cast<double>(with_err);
    }
    if (with_improvement) a.mean_improvement = improvement.value() / static_cast<double>(with_improvement);
    if (a.count) a.mean_abs_difference = diff.value() / static_cast<double>(a.count);
    return a;
}

std::vector<BandAggregate> band_aggregates(const std::vector<EvaluationPoint>& points,
                                           const std::vector<double>& levels) {
    constexpr double slack = 1e-9;
    std::vector<BandAggregate> out;
    for (BandSide side : {BandSide::high, BandSide::low}) {
        for (double p : levels) {
            std::vector<const EvaluationPoint*> members;
            for (const auto& pt : points) {
                const auto probs = pt.belief.probs();
                const bool in = std::all_of(probs.begin(), probs.end(), [&](double x) {
                    return side == BandSide::high ? x >= p - slack : x <= p + slack;
                });
                if (in) members.push_back(&pt);
            }
            out.push_back({p, side, aggregate(members)});
        }
    }
    return out;
}

ErrorReport error_report(const PolicyBundle& bundle, const std::vector<FactoredBelief>& grid,
                         const ReportOptions& options, const std::vector<double>& band_levels) {
    const auto& inst = bundle.instance;
    if (options.with_oracle) {
        const std::size_t horizon = inst.size() - options.stage + 1;
        if (horizon > options.depth_guard)
            throw RefusalError("oracle horizon " + std::to_string(horizon) + " exceeds depth guard " +
                                   std::to_string(options.depth_guard) + " (raise --depth-guard)",
                               "--depth-guard");
    }

    ErrorReport report;
    report.points.resize(grid.size());
    parallel_for(grid.size(), options.threads, [&](std::size_t i) {
        auto& pt = report.points[i];
        pt.belief = grid[i];
        pt.npc_value = evaluate_policy_exact(bundle, grid[i], options.stage, Combiner::npc, options.node_budget);
        pt.vapc_value = evaluate_policy_exact(bundle, grid[i], options.stage, Combiner::vapc, options.node_budget);
        if (options.with_oracle) {
            const double opt = oracle_value(inst, grid[i], options.stage, options.depth_guard);
            pt.oracle_value = opt;
            if (opt > 0.0) {
                pt.rel_err_npc = (opt - pt.npc_value) / opt;
                pt.rel_err_vapc = (opt - pt.vapc_value) / opt;
            }
        }
    });

    std::vector<const EvaluationPoint*> all;
    for (const auto& p : report.points) all.push_back(&p);
    report.overall = aggregate(all);
    report.bands = band_aggregates(report.points, band_levels);
    return report;
}

}  // namespace precmon
