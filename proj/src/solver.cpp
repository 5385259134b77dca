#include "precmon/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

#include "precmon/errors.hpp"

namespace precmon {

std::size_t PolicyBundle::max_set_size() const noexcept {
    std::size_t best = 0;
    for (const auto& sp : subproblems) {
        for (const auto& s : sp.action_sets) best = std::max(best, s.size());
        for (const auto& s : sp.monitoring_sets) best = std::max(best, s.size());
    }
    return best;
}

std::size_t PolicyBundle::total_vectors() const noexcept {
    std::size_t total = 0;
    for (const auto& sp : subproblems) {
        for (const auto& s : sp.action_sets) total += s.size();
        for (const auto& s : sp.monitoring_sets) total += s.size();
    }
    return total;
}

SubproblemPolicy solve_subproblem(const MonitoringInstance& inst, std::size_t k) {
    if (k < 1 || k > inst.size())
        throw ContractError("solve_subproblem: precondition index " + std::to_string(k) +
                            " outside [1," + std::to_string(inst.size()) + "]");
    const StageSpec& tracked = inst.stage(k);

    SubproblemPolicy sp;
    sp.precondition = k;
    sp.action_sets.resize(k);
    sp.monitoring_sets.resize(k);

    sp.action_sets[k - 1] = terminal_set(inst.plan_value, tracked.fail_value, tracked.alt_value);
    for (std::size_t t = k; t >= 1; --t) {
        if (t < k) {
            // Abandoning before step t pays that step's alternative.
            sp.action_sets[t - 1] = action_backup_interior(sp.monitoring_sets[t], tracked.transition,
                                                           inst.stage(t).alt_value);
        }
        sp.monitoring_sets[t - 1] =
            monitoring_backup(sp.action_sets[t - 1], tracked.sensor, tracked.monitor_cost);
    }
    return sp;
}

PolicyBundle solve_all(const MonitoringInstance& inst, unsigned threads,
                       std::vector<double>* micros) {
    validate(inst);
    const std::size_t n = inst.size();
    PolicyBundle bundle{inst, std::vector<SubproblemPolicy>(n)};
    std::vector<double> times(n, 0.0);

    auto work = [&](std::size_t k) {
        const auto start = std::chrono::steady_clock::now();
        bundle.subproblems[k - 1] = solve_subproblem(inst, k);
        times[k - 1] = std::chrono::duration<double, std::micro>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        for (std::size_t k = 1; k <= n; ++k) work(k);
    } else {
        std::atomic<std::size_t> cursor{1};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = cursor++; k <= n; k = cursor++) work(k);
            });
        }
    }
    if (micros) *micros = std::move(times);
    return bundle;
}

}  // namespace precmon
