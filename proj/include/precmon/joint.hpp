#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "precmon/belief.hpp"
#include "precmon/combine.hpp"
#include "precmon/model.hpp"
#include "precmon/solver.hpp"

namespace precmon {

inline constexpr std::size_t kDefaultDepthGuard = 3;
inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

// ---------------------------------------------------------------------------
// Exact optimum of the joint monitoring problem by expectimax over the belief
// tree. Monitoring-subset branching makes this exponential in the remaining
// horizon, so it refuses horizons beyond `depth_guard`.

struct ActionStageValues {
    double abandon = 0.0;
    double cont = 0.0;
    double best() const noexcept { return cont >= abandon ? cont : abandon; }
};

class JointOracle {
public:
    explicit JointOracle(const MonitoringInstance& inst, std::size_t depth_guard = kDefaultDepthGuard);

    // Optimal expected net value from monitoring stage t with belief b.
    double monitoring_value(const FactoredBelief& b, std::size_t t);
    // Both options at action stage t+ with (post-report) belief b.
    ActionStageValues action_values(const FactoredBelief& b, std::size_t t);

    std::size_t memo_size() const noexcept;

private:
    struct Memo;
    double monitoring(const std::vector<double>& b, std::size_t t);
    ActionStageValues action(const std::vector<double>& b, std::size_t t);
    void check_horizon(std::size_t t) const;

    const MonitoringInstance& inst_;
    std::size_t depth_guard_;
    std::shared_ptr<Memo> memo_;
};

double oracle_value(const MonitoringInstance& inst, const FactoredBelief& b, std::size_t t,
                    std::size_t depth_guard = kDefaultDepthGuard);

// ---------------------------------------------------------------------------
// Exact expected net value of running a combiner from monitoring stage t,
// expanding the report/failure tree of the policy's own choices.

class PolicyEvaluator {
public:
    PolicyEvaluator(const PolicyBundle& bundle, Combiner combiner,
                    std::uint64_t node_budget = kDefaultNodeBudget);

    double value(const FactoredBelief& b, std::size_t t);
    std::uint64_t nodes_expanded() const noexcept { return nodes_; }

private:
    struct Memo;
    double monitoring(const FactoredBelief& b, std::size_t t);
    double action(const FactoredBelief& b, std::size_t t);
    void charge();

    const PolicyBundle& bundle_;
    Combiner combiner_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::shared_ptr<Memo> memo_;
};

double evaluate_policy_exact(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                             Combiner combiner, std::uint64_t node_budget = kDefaultNodeBudget);

// ---------------------------------------------------------------------------
// Monte Carlo

enum class Terminal : std::uint8_t { completed, abandoned, failed };

struct EpisodeOutcome {
    Terminal terminal = Terminal::completed;
    std::size_t stage = 0;  // stage of abandonment or failure; n when completed
    double terminal_value = 0.0;
    double monitoring_paid = 0.0;
    double net_value() const noexcept { return terminal_value - monitoring_paid; }
};

struct SimulationResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t episodes = 0;
};

// Samples true precondition states from b, evolves them with the transition
// model, draws reports from the sensor model, and lets the combiner act on
// the induced beliefs. Reproducible for a fixed seed.
SimulationResult simulate(const PolicyBundle& bundle, const FactoredBelief& b, Combiner combiner,
                          std::uint64_t episodes, std::uint64_t seed, unsigned threads = 1);

// ---------------------------------------------------------------------------
// Belief grids and error reports

// {0, 1/(count-1), ..., 1}; count must be >= 2.
std::vector<double> uniform_levels(std::size_t count);

// Cartesian product levels^n in lexicographic order (stage 1 varies slowest).
std::vector<FactoredBelief> belief_grid(std::size_t n, const std::vector<double>& levels);

struct EvaluationPoint {
    FactoredBelief belief;
    std::optional<double> oracle_value;
    double npc_value = 0.0;
    double vapc_value = 0.0;
    std::optional<double> rel_err_npc;
    std::optional<double> rel_err_vapc;
};

// Aggregates over a subset of points. Relative errors only cover points with
// an oracle value > 0; `excluded` counts the rest. Improvement is
// (vapc - npc) / npc over points with npc > 0.
struct Aggregate {
    std::size_t count = 0;
    std::size_t excluded = 0;
    double mean_rel_err_npc = 0.0;
    double max_rel_err_npc = 0.0;
    double mean_rel_err_vapc = 0.0;
    double max_rel_err_vapc = 0.0;
    double mean_improvement = 0.0;
    double max_improvement = 0.0;
    double mean_abs_difference = 0.0;
};

enum class BandSide : std::uint8_t { high, low };

struct BandAggregate {
    double band = 0.0;
    BandSide side = BandSide::high;
    Aggregate stats;
};

struct ReportOptions {
    bool with_oracle = true;
    std::size_t depth_guard = kDefaultDepthGuard;
    std::uint64_t node_budget = kDefaultNodeBudget;
    std::size_t stage = 1;
    unsigned threads = 1;
};

struct ErrorReport {
    std::vector<EvaluationPoint> points;
    Aggregate overall;
    std::vector<BandAggregate> bands;  // high then low, one per grid level
};

Aggregate aggregate(const std::vector<const EvaluationPoint*>& points);

// High band p keeps points whose every entry is >= p; low band keeps <= p.
// One band per value in `levels`.
std::vector<BandAggregate> band_aggregates(const std::vector<EvaluationPoint>& points,
                                           const std::vector<double>& levels);

ErrorReport error_report(const PolicyBundle& bundle, const std::vector<FactoredBelief>& grid,
                         const ReportOptions& options, const std::vector<double>& band_levels);

}  // namespace precmon
