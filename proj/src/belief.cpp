#include "precmon/belief.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <string>

#include "precmon/errors.hpp"

namespace precmon {

namespace {

constexpr double kRangeSlack = 1e-9;

void check_range([[maybe_unused]] double b) {
    assert(b >= -kRangeSlack && b <= 1.0 + kRangeSlack && "belief left [0,1]");
}

}  // namespace

double report_likelihood(double b, const SensorModel& sensor, Report report) {
    if (report == Report::holds)
        return b * (1.0 - sensor.false_negative) + (1.0 - b) * sensor.false_positive;
    return b * sensor.false_negative + (1.0 - b) * (1.0 - sensor.false_positive);
}

double observe_update(double b, const SensorModel& sensor, Report report) {
    const double like_ok =
        report == Report::holds ? 1.0 - sensor.false_negative : sensor.false_negative;
    const double like_fail =
        report == Report::holds ? sensor.false_positive : 1.0 - sensor.false_positive;
    const double joint_ok = b * like_ok;
    const double evidence = joint_ok + (1.0 - b) * like_fail;
    if (evidence == 0.0)
        throw ImpossibleObservation(std::string("report '") +
                                    (report == Report::holds ? "holds" : "failed") +
                                    "' has zero probability under the current belief");
    const double post = joint_ok / evidence;
    check_range(post);
    return post;
}

double transition_update(double b, const TransitionModel& trans) {
    const double next = b * (1.0 - trans.p_fail) + (1.0 - b) * trans.p_repair;
    check_range(next);
    return next;
}

FactoredBelief::FactoredBelief(std::vector<double> probs) : probs_(std::move(probs)) {
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("belief entries must lie in [0,1]");
    }
}

void FactoredBelief::observe(std::size_t k, const SensorModel& sensor, Report report) {
    auto& p = probs_.at(k - 1);
    p = observe_update(p, sensor, report);
}

void FactoredBelief::advance_past(std::size_t t, const MonitoringInstance& inst) {
    for (std::size_t k = t + 1; k <= probs_.size(); ++k)
        probs_[k - 1] = transition_update(probs_[k - 1], inst.stage(k).transition);
}

FactoredBelief parse_belief(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        auto comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::string tok = csv.substr(pos, comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        double v = 0.0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size())
            throw InputError("malformed belief entry '" + tok + "'");
        if (!(v >= 0.0 && v <= 1.0)) throw InputError("belief entry '" + tok + "' outside [0,1]");
        out.push_back(v);
        pos = comma + 1;
    }
    return FactoredBelief(std::move(out));
}

}  // namespace precmon
