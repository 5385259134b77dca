#pragma once

#include <random>
#include <string>

#include "precmon/model.hpp"

namespace precmon::testing {

inline std::string data_path(const std::string& file) { return std::string(PRECMON_DATA_DIR) + "/" + file; }

// Random valid instance with plan_value >= every alternative >= every failure value.
inline MonitoringInstance random_instance(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MonitoringInstance inst;
    inst.name = "random";
    inst.plan_value = 10.0 + 30.0 * u(rng);
    for (std::size_t i = 0; i < n; ++i) {
        StageSpec s;
        s.alt_value = inst.plan_value * (0.2 + 0.7 * u(rng));
        s.fail_value = s.alt_value * u(rng);
        s.monitor_cost = 1.5 * u(rng);
        s.sensor = {0.45 * u(rng), 0.45 * u(rng)};
        s.transition = {0.2 * u(rng), 0.2 * u(rng)};
        s.prior = 1.0;
        inst.stages.push_back(s);
    }
    return inst;
}

}  // namespace precmon::testing
