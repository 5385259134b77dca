#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "precmon/belief.hpp"
#include "precmon/solver.hpp"

namespace precmon {

enum class Combiner : std::uint8_t { npc, vapc };

std::string_view to_string(Combiner c) noexcept;
Combiner combiner_from_string(std::string_view s);

// Preconditions k >= t whose own stage-t monitoring policy fires at b_k.
std::vector<std::size_t> npc_monitor(const PolicyBundle& bundle, const FactoredBelief& b,
                                     std::size_t t);

// Continue/abandon at action stage t+, with the per-subproblem values
// consulted. `values[i]` and `choices[i]` belong to subproblem t + i; entries
// for subproblems never reached (VAPC stops at the first abandon) stay NaN /
// continue.
struct ActionDecision {
    Action action = Action::cont;
    std::vector<double> values;
    std::vector<Action> choices;
};

ActionDecision npc_decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t);
ActionDecision vapc_decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t);

inline Action npc_action(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t) {
    return npc_decide(bundle, b, t).action;
}
inline Action vapc_action(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t) {
    return vapc_decide(bundle, b, t).action;
}
ActionDecision decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                      Combiner combiner);

// Replaces the nominal plan value inside every vector with the downstream
// estimate v_hat_next, in proportion to each vector's reach probabilities.
VectorSet adjust_set(const VectorSet& set, double plan_value, double v_hat_next);

struct StepDecision {
    std::size_t stage = 0;
    std::vector<std::size_t> monitor_set;
    Action object_action = Action::cont;
    FactoredBelief posterior;  // belief after the stage's reports, before the action
};

// Supplies the report for a monitored precondition.
using ReportSource = std::function<Report(std::size_t k)>;

// One monitoring stage and one action stage: monitor per NPC, fold the reports
// from `observe` into the belief, then choose the object action with `combiner`.
StepDecision run_step(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                      Combiner combiner, const ReportSource& observe);

}  // namespace precmon
