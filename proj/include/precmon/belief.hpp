#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "precmon/model.hpp"

namespace precmon {

enum class Report : std::uint8_t { holds, failed };

// Pr(report | b) marginalized over the precondition's status.
double report_likelihood(double b, const SensorModel& sensor, Report report);

// Bayes posterior Pr(holds | report). Throws ImpossibleObservation when the
// report has zero predictive probability under b.
double observe_update(double b, const SensorModel& sensor, Report report);

// One plan step of spontaneous failure/repair.
double transition_update(double b, const TransitionModel& trans);

// Independent per-precondition beliefs; entry k-1 is Pr(precondition k holds).
class FactoredBelief {
public:
    FactoredBelief() = default;
    explicit FactoredBelief(std::vector<double> probs);

    std::size_t size() const noexcept { return probs_.size(); }
    // 1-based, matching stage numbering.
    double operator[](std::size_t k) const { return probs_.at(k - 1); }
    std::span<const double> probs() const noexcept { return probs_; }

    // Bayes update of precondition k from one report.
    void observe(std::size_t k, const SensorModel& sensor, Report report);
    // Apply each remaining precondition's transition after step t executes.
    void advance_past(std::size_t t, const MonitoringInstance& inst);

    bool operator==(const FactoredBelief&) const = default;

private:
    std::vector<double> probs_;
};

// Parses "0.9,0.8,1.0". Throws InputError on malformed or out-of-range entries.
FactoredBelief parse_belief(const std::string& csv);

}  // namespace precmon
