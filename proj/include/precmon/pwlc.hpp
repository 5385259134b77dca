#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "precmon/model.hpp"

namespace precmon {

// `skip` marks a monitoring-stage vector that reproduces the following action
// stage unchanged (the empty monitoring set).
enum class Action : std::uint8_t { cont, abandon, monitor, skip };

std::string_view to_string(Action a) noexcept;
Action action_from_string(std::string_view s);

enum class StageKind : std::uint8_t { monitoring, action };

std::string_view to_string(StageKind k) noexcept;

// Linear value over the belief b = Pr(OK) of a single precondition, together
// with the probability, from each true state, that its conditional plan
// reaches and executes the tracked action.
struct AlphaVector {
    double v_ok = 0.0;
    double v_fail = 0.0;
    Action action = Action::cont;
    double p_ok = 0.0;
    double p_fail_reach = 0.0;

    double value(double b) const noexcept { return v_fail + b * (v_ok - v_fail); }
    double slope() const noexcept { return v_ok - v_fail; }

    bool operator==(const AlphaVector&) const = default;
};

// Two lines closer than this in both components are the same line; a line
// must beat the rest by more than this somewhere to survive pruning.
inline constexpr double kEnvelopeTol = 1e-12;

// True when `a` wins a value tie against `b`: continue, then skip, then
// monitor, then abandon; within a tag the lexicographically smaller
// (v_ok, v_fail).
bool preferred_on_tie(const AlphaVector& a, const AlphaVector& b) noexcept;

struct VectorSet {
    std::vector<AlphaVector> vectors;
    StageKind kind = StageKind::action;

    std::size_t size() const noexcept { return vectors.size(); }
    bool empty() const noexcept { return vectors.empty(); }
};

struct Evaluation {
    double value = 0.0;
    const AlphaVector* argmax = nullptr;
};

// Max over the set at belief b with the tie-break above. The returned pointer
// refers into `set`.
Evaluation evaluate(const VectorSet& set, double b);

// Exact upper envelope of the lines over b in [0,1]. Survivors are ordered by
// increasing slope (equivalently, by the belief interval on which they win).
VectorSet prune_envelope(const VectorSet& set);

// Monitoring stage preceding an action stage: every report-to-successor
// strategy paying `cost`, plus `next` copied verbatim as skip vectors.
VectorSet monitoring_backup(const VectorSet& next, const SensorModel& sensor, double cost);

// Interior action stage: continue (one transition step into `next`) or abandon
// for the constant `alt_value`. The executed action's own precondition is not
// the tracked one, so continuing never fails here.
VectorSet action_backup_interior(const VectorSet& next, const TransitionModel& trans,
                                 double alt_value);

// Final action stage of a single-failure problem.
VectorSet terminal_set(double plan_value, double fail_value, double alt_value);

}  // namespace precmon
