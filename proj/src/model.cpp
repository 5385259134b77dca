#include "precmon/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "instance_json.hpp"
#include "precmon/errors.hpp"

namespace precmon {

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "invalid instance:";
          for (const auto& v : violations) msg += "\n  - " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<double> MonitoringInstance::priors() const {
    std::vector<double> out;
    out.reserve(stages.size());
    for (const auto& s : stages) out.push_back(s.prior);
    return out;
}

namespace {

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string stage_field(std::size_t t, const char* field) {
    return "stages[" + std::to_string(t) + "]." + field;
}

}  // namespace

std::vector<std::string> violations(const MonitoringInstance& inst) {
    std::vector<std::string> out;
    if (!std::isfinite(inst.plan_value)) out.push_back("plan_value must be finite");
    if (inst.stages.empty()) out.push_back("stages must contain at least one stage");

    for (std::size_t i = 0; i < inst.stages.size(); ++i) {
        const auto& s = inst.stages[i];
        auto prob = [&](double p, const char* field) {
            if (!is_probability(p)) out.push_back(stage_field(i, field) + " must lie in [0,1]");
        };
        prob(s.sensor.false_positive, "false_positive");
        prob(s.sensor.false_negative, "false_negative");
        prob(s.transition.p_fail, "p_fail");
        prob(s.transition.p_repair, "p_repair");
        prob(s.prior, "prior");
        if (!std::isfinite(s.alt_value)) out.push_back(stage_field(i, "alt_value") + " must be finite");
        if (!std::isfinite(s.fail_value)) out.push_back(stage_field(i, "fail_value") + " must be finite");
        if (!(s.monitor_cost >= 0.0) || !std::isfinite(s.monitor_cost))
            out.push_back(stage_field(i, "monitor_cost") + " must be a finite nonnegative number");
        // Failure discovered in advance can always be ignored, so the
        // alternative is never worse than attempting with a failed precondition.
        if (s.alt_value < s.fail_value)
            out.push_back(stage_field(i, "alt_value") + " must be >= fail_value (alternative " +
                          "plan cannot be worse than failing and repairing)");
    }
    return out;
}

std::vector<std::string> warnings(const MonitoringInstance& inst) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < inst.stages.size(); ++i) {
        if (inst.stages[i].alt_value > inst.plan_value)
            out.push_back(stage_field(i, "alt_value") + " exceeds plan_value");
    }
    return out;
}

void validate(const MonitoringInstance& inst) {
    auto v = violations(inst);
    if (!v.empty()) throw ValidationError(std::move(v));
}

namespace detail {

namespace {

double number_field(const nlohmann::json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError("missing field '" + where + key + "'");
    if (!it->is_number()) throw InputError("field '" + where + key + "' must be a number");
    return it->get<double>();
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw InputError("unknown field '" + where + it.key() + "'");
    }
}

}  // namespace

MonitoringInstance instance_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("instance must be a JSON object");
    reject_unknown(j, {"name", "plan_value", "stages"}, "");

    MonitoringInstance inst;
    auto name = j.find("name");
    if (name == j.end()) throw InputError("missing field 'name'");
    if (!name->is_string()) throw InputError("field 'name' must be a string");
    inst.name = name->get<std::string>();
    inst.plan_value = number_field(j, "plan_value", "");

    auto stages = j.find("stages");
    if (stages == j.end()) throw InputError("missing field 'stages'");
    if (!stages->is_array()) throw InputError("field 'stages' must be an array");

    static const std::set<std::string> stage_keys = {
        "alt_value", "fail_value", "monitor_cost", "p_fail",
        "p_repair", "false_positive", "false_negative", "prior"};
    for (std::size_t i = 0; i < stages->size(); ++i) {
        const auto& js = (*stages)[i];
        const std::string where = "stages[" + std::to_string(i) + "].";
        if (!js.is_object()) throw InputError("'" + where.substr(0, where.size() - 1) + "' must be an object");
        reject_unknown(js, stage_keys, where);
        StageSpec s;
        s.alt_value = number_field(js, "alt_value", where);
        s.fail_value = number_field(js, "fail_value", where);
        s.monitor_cost = number_field(js, "monitor_cost", where);
        s.transition.p_fail = number_field(js, "p_fail", where);
        s.transition.p_repair = number_field(js, "p_repair", where);
        s.sensor.false_positive = number_field(js, "false_positive", where);
        s.sensor.false_negative = number_field(js, "false_negative", where);
        s.prior = number_field(js, "prior", where);
        inst.stages.push_back(s);
    }
    return inst;
}

nlohmann::json instance_to_json(const MonitoringInstance& inst) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : inst.stages) {
        stages.push_back({{"alt_value", s.alt_value},
                          {"fail_value", s.fail_value},
                          {"monitor_cost", s.monitor_cost},
                          {"p_fail", s.transition.p_fail},
                          {"p_repair", s.transition.p_repair},
                          {"false_positive", s.sensor.false_positive},
                          {"false_negative", s.sensor.false_negative},
                          {"prior", s.prior}});
    }
    return {{"name", inst.name}, {"plan_value", inst.plan_value}, {"stages", std::move(stages)}};
}

}  // namespace detail

MonitoringInstance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
    auto inst = detail::instance_from_json(j);
    validate(inst);
    return inst;
}

std::string serialize_instance(const MonitoringInstance& inst) {
    return detail::instance_to_json(inst).dump(2) + "\n";
}

MonitoringInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read instance file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

double myopic_evoi(double p_fail_by, double v_alt, double v_fail) {
    if (!is_probability(p_fail_by)) throw ContractError("myopic_evoi: probability outside [0,1]");
    if (v_alt < v_fail) throw ContractError("myopic_evoi: v_alt must be >= v_fail");
    return p_fail_by * (v_alt - v_fail);
}

MonitoringInstance generate_scaling_family(const MonitoringInstance& base, std::size_t n) {
    if (n == 0) throw ContractError("generate_scaling_family: n must be positive");
    validate(base);

    const auto& first = base.stages.front();
    const auto& last = base.stages.back();
    MonitoringInstance out;
    out.name = base.name + "-scaled-" + std::to_string(n);
    out.plan_value = base.plan_value;
    out.stages.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        StageSpec s = base.stages[i % base.stages.size()];
        const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        s.alt_value = first.alt_value + frac * (last.alt_value - first.alt_value);
        s.fail_value = first.fail_value + frac * (last.fail_value - first.fail_value);
        out.stages.push_back(s);
    }
    validate(out);
    return out;
}

}  // namespace precmon
