#include "precmon/policy_io.hpp"

#include <fstream>
#include <sstream>

#include "instance_json.hpp"
#include "precmon/errors.hpp"

namespace precmon {

namespace {

constexpr const char* kFormat = "precmon-policy";
constexpr int kVersion = 1;

nlohmann::json set_to_json(const VectorSet& set) {
    auto arr = nlohmann::json::array();
    for (const auto& v : set.vectors) {
        arr.push_back({{"v_ok", v.v_ok},
                       {"v_fail", v.v_fail},
                       {"action", std::string(to_string(v.action))},
                       {"p_ok", v.p_ok},
                       {"p_fail_reach", v.p_fail_reach}});
    }
    return arr;
}

VectorSet set_from_json(const nlohmann::json& arr, StageKind kind) {
    if (!arr.is_array() || arr.empty()) throw InputError("policy vector set must be a nonempty array");
    VectorSet set{{}, kind};
    for (const auto& j : arr) {
        AlphaVector v;
        v.v_ok = j.at("v_ok").get<double>();
        v.v_fail = j.at("v_fail").get<double>();
        v.action = action_from_string(j.at("action").get<std::string>());
        v.p_ok = j.at("p_ok").get<double>();
        v.p_fail_reach = j.at("p_fail_reach").get<double>();
        set.vectors.push_back(v);
    }
    return set;
}

}  // namespace

std::string serialize_policy(const PolicyBundle& bundle) {
    auto subs = nlohmann::json::array();
    for (const auto& sp : bundle.subproblems) {
        auto stages = nlohmann::json::array();
        for (std::size_t t = 1; t <= sp.precondition; ++t) {
            stages.push_back({{"stage", t},
                              {"monitoring", set_to_json(sp.monitoring_set(t))},
                              {"action", set_to_json(sp.action_set(t))}});
        }
        subs.push_back({{"precondition", sp.precondition}, {"stages", std::move(stages)}});
    }
    nlohmann::json j = {{"format", kFormat},
                        {"version", kVersion},
                        {"instance", detail::instance_to_json(bundle.instance)},
                        {"subproblems", std::move(subs)}};
    return j.dump(1) + "\n";
}

PolicyBundle parse_policy(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.value("format", "") != kFormat) throw InputError("not a precmon policy file");
        if (j.value("version", 0) != kVersion) throw InputError("unsupported policy version");

        PolicyBundle bundle;
        bundle.instance = detail::instance_from_json(j.at("instance"));
        validate(bundle.instance);
        const auto& subs = j.at("subproblems");
        if (!subs.is_array() || subs.size() != bundle.instance.size())
            throw InputError("policy must hold one subproblem per stage");
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const auto& js = subs[i];
            SubproblemPolicy sp;
            sp.precondition = js.at("precondition").get<std::size_t>();
            if (sp.precondition != i + 1) throw InputError("policy subproblems out of order");
            const auto& stages = js.at("stages");
            if (!stages.is_array() || stages.size() != sp.precondition)
                throw InputError("subproblem " + std::to_string(sp.precondition) +
                                 " must have one entry per stage");
            for (const auto& st : stages) {
                sp.monitoring_sets.push_back(set_from_json(st.at("monitoring"), StageKind::monitoring));
                sp.action_sets.push_back(set_from_json(st.at("action"), StageKind::action));
            }
            bundle.subproblems.push_back(std::move(sp));
        }
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed policy file: ") + e.what());
    }
}

PolicyBundle load_policy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read policy file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_policy(buf.str());
}

}  // namespace precmon
