// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "precmon/errors.hpp"
#include "precmon/joint.hpp"
#include "precmon/model.hpp"
#include "precmon/pwlc.hpp"
#include "test_support.hpp"

using namespace precmon;
using precmon::testing::data_path;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail) {
    std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void single_failure_correctness() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
        auto inst = precmon::testing::random_instance(rng, n);
        const std::size_t k = 1 + static_cast<std::size_t>(rng() % n);
        for (std::size_t i = 1; i <= n; ++i) {
            if (i == k) continue;
            auto& s = inst.stages[i - 1];
            s.transition = {0.0, 0.0};
            s.prior = 1.0;
            s.monitor_cost = 1e6;
        }
        const auto sp = solve_subproblem(inst, k);
        JointOracle oracle(inst, 6);
        for (int j = 0; j < 100; ++j) {
            std::vector<double> probs(n, 1.0);
            probs[k - 1] = u(rng);
            const double dp = evaluate(sp.monitoring_set(1), probs[k - 1]).value;
            const double opt = oracle.monitoring_value(FactoredBelief(probs), 1);
            worst = std::max(worst, std::abs(dp - opt));
            ++checks;
        }
    }
    const double secs = seconds_since(start);
    report(1, "single-failure correctness", worst <= 1e-9 && secs < 60.0,
           fmt("%zu checks, max |dp - oracle| = %.3g, %.2fs", checks, worst, secs));
}

void pruning_soundness() {
    const auto start = Clock::now();
    std::mt19937_64 rng(2002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int sets = 0;
    for (std::size_t size = 1; size <= 200; size += (size < 20 ? 1 : 9)) {
        for (int rep = 0; rep < 3; ++rep) {
            VectorSet set;
            for (std::size_t i = 0; i < size; ++i)
                set.vectors.push_back({20 * u(rng), 20 * u(rng), Action::monitor, 0.0, 0.0});
            const auto pruned = prune_envelope(set);
            for (int j = 0; j < 10000; ++j) {
                const double b = u(rng);
                double brute = -INFINITY;
                for (const auto& v : set.vectors) brute = std::max(brute, v.value(b));
                worst = std::max(worst, std::abs(brute - evaluate(pruned, b).value));
            }
            ++sets;
        }
    }
    const double secs = seconds_since(start);
    report(2, "pruning soundness", worst <= 1e-9 && secs < 10.0,
           fmt("%d sets up to 200 lines x 10000 beliefs, max gap %.3g, %.2fs", sets, worst, secs));
}

void easy3_grid() {
    const auto start = Clock::now();
    const auto inst = load_instance(data_path("easy3.json"));
    const auto bundle = solve_all(inst);
    const auto grid = belief_grid(3, uniform_levels(11));
    ReportOptions opts;
    const auto rep = error_report(bundle, grid, opts, {0.9});
    const double secs = seconds_since(start);
    const auto& a = rep.overall;

    const bool ok3 = std::abs(a.mean_rel_err_npc - 0.049) <= 0.03 &&
                     std::abs(a.mean_rel_err_vapc - 0.047) <= 0.03 && a.max_rel_err_npc <= 0.25 &&
                     a.max_rel_err_vapc <= 0.25 && secs < 600.0;
    report(3, "easy3 error statistics", ok3,
           fmt("%zu points, mean npc %.4f vapc %.4f, max npc %.4f vapc %.4f, %.2fs", rep.points.size(),
               a.mean_rel_err_npc, a.mean_rel_err_vapc, a.max_rel_err_npc, a.max_rel_err_vapc, secs));

    std::size_t high = 0;
    double worst = 0.0;
    for (const auto& p : rep.points) {
        const auto probs = p.belief.probs();
        if (!std::all_of(probs.begin(), probs.end(), [](double x) { return x >= 0.9 - 1e-9; })) continue;
        ++high;
        worst = std::max(worst, std::abs(*p.oracle_value - p.npc_value));
    }
    report(4, "high-prior optimality", high > 0 && worst <= 1e-9,
           fmt("%zu points with all entries >= 0.9, max |oracle - npc| = %.3g", high, worst));

    // Abandon soundness: wherever NPC abandons at the first action stage, the
    // joint optimum abandons too.
    JointOracle oracle(inst, opts.depth_guard);
    std::size_t abandons = 0, violations = 0;
    for (const auto& b : grid) {
        if (npc_action(bundle, b, 1) != Action::abandon) continue;
        ++abandons;
        const auto v = oracle.action_values(b, 1);
        if (v.abandon < v.cont - 1e-9) ++violations;
    }
    report(8, "abandon soundness", violations == 0,
           fmt("%zu npc abandon points, %zu where the oracle prefers to continue", abandons, violations));
}

void five_stage_improvement() {
    const auto start = Clock::now();
    const auto bundle = solve_all(load_instance(data_path("five.json")));
    ReportOptions opts;
    opts.with_oracle = false;
    std::string detail;
    bool positive = true;
    double peak = -INFINITY;
    for (double p : {0.80, 0.85, 0.90, 0.95, 1.00}) {
        const auto grid = belief_grid(5, {p - 0.10, p - 0.05, p});
        const auto rep = error_report(bundle, grid, opts, {});
        const double m = rep.overall.mean_improvement;
        if (p <= 0.9 + 1e-9 && !(m > 0.0)) positive = false;
        peak = std::max(peak, m);
        detail += fmt("p=%.2f %.4f; ", p, m);
    }
    const double secs = seconds_since(start);
    report(5, "five-stage vapc improvement", positive && peak >= 0.03 && peak <= 0.19 && secs < 600.0,
           detail + fmt("peak %.4f, %.2fs", peak, secs));
}

void scaling() {
    const auto start = Clock::now();
    const auto base = load_instance(data_path("five.json"));
    const std::vector<std::size_t> sizes = {25, 50, 100, 200, 400};
    std::vector<double> xs, ys;
    std::string detail;
    std::size_t largest_set = 0;
    for (std::size_t n : sizes) {
        const auto inst = generate_scaling_family(base, n);
        double best = INFINITY;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t0 = Clock::now();
            const auto bundle = solve_all(inst);
            best = std::min(best, seconds_since(t0));
            largest_set = std::max(largest_set, bundle.max_set_size());
            if (bundle.size() != n) best = INFINITY;
        }
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(std::max(best, 1e-6)));
        detail += fmt("n=%zu %.4fs; ", n, best);
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    const double secs = seconds_since(start);
    report(6, "scaling", std::isfinite(slope) && slope <= 2.5 && secs < 60.0,
           detail + fmt("log-log slope %.3f, max set %zu, %.2fs total", slope, largest_set, secs));
}

void monte_carlo() {
    const auto start = Clock::now();
    const std::vector<PolicyBundle> bundles = {solve_all(load_instance(data_path("easy3.json"))),
                                               solve_all(load_instance(data_path("five.json")))};
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    int inside = 0, total = 0;
    double worst_z = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto& bundle = bundles[i % 2];
        std::vector<double> probs(bundle.size());
        for (auto& p : probs) p = u(rng);
        const FactoredBelief b(probs);
        const Combiner c = (i / 2) % 2 == 0 ? Combiner::npc : Combiner::vapc;
        const double exact = evaluate_policy_exact(bundle, b, 1, c);
        const auto sim = simulate(bundle, b, c, 1'000'000, 4000 + static_cast<std::uint64_t>(i));
        const double gap = std::abs(sim.mean - exact);
        bool ok;
        if (sim.std_error == 0.0) {
            ok = gap <= 1e-9;
        } else {
            ok = gap <= 3.0 * sim.std_error;
            worst_z = std::max(worst_z, gap / sim.std_error);
        }
        inside += ok;
        ++total;
    }
    const double secs = seconds_since(start);
    report(7, "monte carlo consistency", inside == total && secs < 300.0,
           fmt("%d/%d points inside 3 SE, worst z %.2f, %.2fs", inside, total, worst_z, secs));
}

}  // namespace

int main() {
    try {
        single_failure_correctness();
        pruning_soundness();
        easy3_grid();
        five_stage_improvement();
        scaling();
        monte_carlo();
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 100;
    }
    std::printf("%d criteria failed\n", failures);
    return failures;
}
