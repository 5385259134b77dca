#pragma once

#include <cstddef>
#include <vector>

#include "precmon/model.hpp"
#include "precmon/pwlc.hpp"

namespace precmon {

// Value function of the k-th single-failure problem: precondition k is the
// only one that can fail, tracked over monitoring stages 1..k.
struct SubproblemPolicy {
    std::size_t precondition = 0;          // k, 1-based
    std::vector<VectorSet> action_sets;    // [t-1] -> action stage t+
    std::vector<VectorSet> monitoring_sets;  // [t-1] -> monitoring stage t

    const VectorSet& action_set(std::size_t t) const { return action_sets.at(t - 1); }
    const VectorSet& monitoring_set(std::size_t t) const { return monitoring_sets.at(t - 1); }
};

struct PolicyBundle {
    MonitoringInstance instance;
    std::vector<SubproblemPolicy> subproblems;  // [k-1]

    const SubproblemPolicy& subproblem(std::size_t k) const { return subproblems.at(k - 1); }
    std::size_t size() const noexcept { return subproblems.size(); }
    // Largest pruned set over every stage of every subproblem.
    std::size_t max_set_size() const noexcept;
    std::size_t total_vectors() const noexcept;
};

SubproblemPolicy solve_subproblem(const MonitoringInstance& inst, std::size_t k);

// Solves every subproblem. `threads` > 1 fans subproblems out across workers;
// the result does not depend on scheduling. When `micros` is non-null it
// receives the wall time of each subproblem in microseconds.
PolicyBundle solve_all(const MonitoringInstance& inst, unsigned threads = 1,
                       std::vector<double>* micros = nullptr);

}  // namespace precmon
