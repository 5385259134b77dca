#include "precmon/combine.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "precmon/errors.hpp"

namespace precmon {

std::string_view to_string(Combiner c) noexcept { return c == Combiner::npc ? "npc" : "vapc"; }

Combiner combiner_from_string(std::string_view s) {
    if (s == "npc") return Combiner::npc;
    if (s == "vapc") return Combiner::vapc;
    throw InputError("unknown combiner '" + std::string(s) + "' (expected npc or vapc)");
}

namespace {

void check_query(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t) {
    const std::size_t n = bundle.size();
    if (t < 1 || t > n)
        throw ContractError("stage " + std::to_string(t) + " outside [1," + std::to_string(n) + "]");
    if (b.size() != n)
        throw ContractError("belief has " + std::to_string(b.size()) + " entries, expected " +
                            std::to_string(n));
}

ActionDecision blank_decision(std::size_t n, std::size_t t) {
    ActionDecision d;
    d.values.assign(n - t + 1, std::numeric_limits<double>::quiet_NaN());
    d.choices.assign(n - t + 1, Action::cont);
    return d;
}

}  // namespace

std::vector<std::size_t> npc_monitor(const PolicyBundle& bundle, const FactoredBelief& b,
                                     std::size_t t) {
    check_query(bundle, b, t);
    std::vector<std::size_t> out;
    for (std::size_t k = t; k <= bundle.size(); ++k) {
        const auto ev = evaluate(bundle.subproblem(k).monitoring_set(t), b[k]);
        if (ev.argmax->action == Action::monitor) out.push_back(k);
    }
    return out;
}

ActionDecision npc_decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t) {
    check_query(bundle, b, t);
    const std::size_t n = bundle.size();
    auto d = blank_decision(n, t);
    for (std::size_t k = t; k <= n; ++k) {
        const auto ev = evaluate(bundle.subproblem(k).action_set(t), b[k]);
        d.values[k - t] = ev.value;
        d.choices[k - t] = ev.argmax->action;
        if (ev.argmax->action == Action::abandon) d.action = Action::abandon;
    }
    return d;
}

VectorSet adjust_set(const VectorSet& set, double plan_value, double v_hat_next) {
    if (v_hat_next > plan_value + 1e-9)
        throw ContractError("adjust_set: downstream value exceeds plan value");
    const double gap = plan_value - v_hat_next;
    VectorSet out = set;
    for (auto& v : out.vectors) {
        v.v_ok -= v.p_ok * gap;
        v.v_fail -= v.p_fail_reach * gap;
    }
    return out;
}

ActionDecision vapc_decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t) {
    check_query(bundle, b, t);
    const std::size_t n = bundle.size();
    const double plan_value = bundle.instance.plan_value;
    auto d = blank_decision(n, t);

    double v_hat = 0.0;
    for (std::size_t k = n; k >= t; --k) {
        const VectorSet& nominal = bundle.subproblem(k).action_set(t);
        Evaluation ev;
        VectorSet adjusted;
        if (k == n) {
            ev = evaluate(nominal, b[k]);
        } else {
            adjusted = adjust_set(nominal, plan_value, v_hat);
            ev = evaluate(adjusted, b[k]);
        }
        v_hat = ev.value;
        d.values[k - t] = ev.value;
        d.choices[k - t] = ev.argmax->action;
        if (ev.argmax->action == Action::abandon) {
            d.action = Action::abandon;
            break;
        }
        if (k == 1) break;
    }
    return d;
}

ActionDecision decide(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                      Combiner combiner) {
    return combiner == Combiner::npc ? npc_decide(bundle, b, t) : vapc_decide(bundle, b, t);
}

StepDecision run_step(const PolicyBundle& bundle, const FactoredBelief& b, std::size_t t,
                      Combiner combiner, const ReportSource& observe) {
    if (t < 1 || t > bundle.size())
        throw InputError("stage " + std::to_string(t) + " outside [1," +
                         std::to_string(bundle.size()) + "]");
    if (b.size() != bundle.size())
        throw InputError("belief has " + std::to_string(b.size()) + " entries, expected " +
                         std::to_string(bundle.size()));

    StepDecision step;
    step.stage = t;
    step.monitor_set = npc_monitor(bundle, b, t);
    step.posterior = b;
    for (std::size_t k : step.monitor_set)
        step.posterior.observe(k, bundle.instance.stage(k).sensor, observe(k));
    step.object_action = decide(bundle, step.posterior, t, combiner).action;
    return step;
}

}  // namespace precmon
