#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace precmon {

// Report polarity: a "holds" report says the precondition is OK.
//   false_positive = Pr(reports_holds  | failed)
//   false_negative = Pr(reports_failed | holds)
struct SensorModel {
    double false_positive = 0.0;
    double false_negative = 0.0;

    // Monotone likelihood ratio: a "holds" report never lowers belief.
    bool informative() const noexcept { return (1.0 - false_negative) >= false_positive; }

    bool operator==(const SensorModel&) const = default;
};

// Stationary two-state dynamics of one precondition across a plan step.
struct TransitionModel {
    double p_fail = 0.0;    // Pr(failed next | holds now)
    double p_repair = 0.0;  // Pr(holds next | failed now)

    bool operator==(const TransitionModel&) const = default;
};

struct StageSpec {
    double alt_value = 0.0;     // value of the best alternative if abandoned here
    double fail_value = 0.0;    // value of attempting the action with its precondition failed
    double monitor_cost = 0.0;  // cost of one report on this stage's precondition
    SensorModel sensor;
    TransitionModel transition;
    double prior = 1.0;         // initial Pr(precondition holds)

    bool operator==(const StageSpec&) const = default;
};

struct MonitoringInstance {
    std::string name;
    double plan_value = 0.0;
    std::vector<StageSpec> stages;

    std::size_t size() const noexcept { return stages.size(); }
    // 1-based stage access, matching plan step numbering.
    const StageSpec& stage(std::size_t t) const { return stages.at(t - 1); }
    std::vector<double> priors() const;

    bool operator==(const MonitoringInstance&) const = default;
};

// Hard constraint violations; empty when the instance is valid.
std::vector<std::string> violations(const MonitoringInstance& inst);
// Soft issues (plan value below an alternative). Never fatal.
std::vector<std::string> warnings(const MonitoringInstance& inst);
// Throws ValidationError listing every violation.
void validate(const MonitoringInstance& inst);

MonitoringInstance parse_instance(const std::string& text);
std::string serialize_instance(const MonitoringInstance& inst);
MonitoringInstance load_instance(const std::filesystem::path& path);

// Expected value of a single perfect report: Pr(failure) * (v_alt - v_fail).
double myopic_evoi(double p_fail_by, double v_alt, double v_fail);

// Deterministic n-stage family derived from `base`: sensor, transition, cost and
// prior cycle through base's stages; alt/fail values are linearly interpolated
// from base's first stage to its last.
MonitoringInstance generate_scaling_family(const MonitoringInstance& base, std::size_t n);

}  // namespace precmon
