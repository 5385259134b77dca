// precmon: command-line driver for solving, deciding, and measuring
// precondition-monitoring policies.
//
// Exit codes: 0 success, 1 input error, 2 refusal (depth guard / node budget).

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "precmon/belief.hpp"
#include "precmon/combine.hpp"
#include "precmon/errors.hpp"
#include "precmon/joint.hpp"
#include "precmon/model.hpp"
#include "precmon/policy_io.hpp"
#include "precmon/solver.hpp"

namespace fs = std::filesystem;
using namespace precmon;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + path.string() + "'");
        out << content;
        if (!out) throw InputError("failed writing '" + path.string() + "'");
    }
    fs::rename(tmp, path);
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError(std::string("malformed ") + what + " entry '" + tok + "'");
        }
    }
    if (out.empty()) throw InputError(std::string(what) + " list is empty");
    return out;
}

// Source of the instance (and optionally a solved policy) for a command.
struct Inputs {
    std::string instance_path;
    std::string policy_path;

    MonitoringInstance instance;
    std::optional<PolicyBundle> bundle;
    std::string digest;

    void load(bool need_policy, unsigned threads) {
        if (!policy_path.empty()) {
            const auto text = read_file(policy_path);
            digest = sha256_hex(text);
            bundle = parse_policy(text);
            instance = bundle->instance;
        } else if (!instance_path.empty()) {
            const auto text = read_file(instance_path);
            digest = sha256_hex(text);
            instance = parse_instance(text);
            if (need_policy) bundle = solve_all(instance, threads);
        } else {
            throw InputError("one of --instance or --policy is required");
        }
        for (const auto& w : warnings(instance)) std::cerr << "warning: " << w << "\n";
    }
};

struct RunLog {
    std::string command;
    std::string digest;
    std::map<std::string, std::string> parameters;
    std::vector<std::string> artifacts;
    nlohmann::json extra = nlohmann::json::object();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void append(const std::string& log_path) const {
        nlohmann::json j = {
            {"command", command},
            {"instance_digest", digest},
            {"parameters", parameters},
            {"wall_micros", std::chrono::duration_cast<std::chrono::microseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count()},
            {"artifact_paths", artifacts}};
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
        const fs::path p(log_path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::app);
        if (!out) throw InputError("cannot append to run log '" + log_path + "'");
        out << j.dump() << "\n";
    }
};

std::string default_log(const std::string& out) {
    const fs::path p(out);
    return (p.has_parent_path() ? p.parent_path() / "precmon_runs.jsonl" : fs::path("precmon_runs.jsonl"))
        .string();
}

std::string sibling(const std::string& out, const std::string& suffix) {
    fs::path p(out);
    const auto stem = p.stem().string();
    return (p.parent_path() / (stem + suffix)).string();
}

// Belief points for a command: an explicit --belief, or a grid.
struct GridSpec {
    std::string belief;
    std::optional<int> grid_levels;
    std::string levels;

    std::vector<double> level_values() const {
        if (!levels.empty()) {
            auto v = parse_double_list(levels, "level");
            for (double x : v)
                if (!(x >= 0.0 && x <= 1.0)) throw InputError("grid level outside [0,1]");
            return v;
        }
        const int count = grid_levels.value_or(11);
        if (count < 2) throw InputError("--grid-levels must be at least 2");
        return uniform_levels(static_cast<std::size_t>(count));
    }

    std::vector<FactoredBelief> points(std::size_t n) const {
        if (!belief.empty()) {
            auto b = parse_belief(belief);
            if (b.size() != n)
                throw InputError("--belief has " + std::to_string(b.size()) + " entries, instance has " +
                                 std::to_string(n) + " stages");
            return {b};
        }
        return belief_grid(n, level_values());
    }
};

std::string point_header(std::size_t n) {
    std::string h;
    for (std::size_t k = 1; k <= n; ++k) h += "b_" + std::to_string(k) + ",";
    return h + "oracle_value,npc_value,vapc_value,rel_err_npc,rel_err_vapc";
}

std::string point_row(const FactoredBelief& b, const std::optional<double>& oracle,
                      const std::optional<double>& npc, const std::optional<double>& vapc,
                      const std::optional<double>& err_npc, const std::optional<double>& err_vapc) {
    std::string row;
    for (double p : b.probs()) row += fmt(p) + ",";
    row += fmt(oracle) + "," + fmt(npc) + "," + fmt(vapc) + "," + fmt(err_npc) + "," + fmt(err_vapc);
    return row;
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Ordinary least squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-3));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = m * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decision-theoretic plan precondition monitoring"};
    app.require_subcommand(1);

    Inputs in;
    GridSpec grid;
    std::string out_path, log_path, summary_path, aggregate_path, combiner_name = "both", side, band;
    std::size_t stage = 1, depth_guard = kDefaultDepthGuard;
    std::uint64_t node_budget = kDefaultNodeBudget, episodes = 100000, seed = 1;
    unsigned threads = 1;
    bool json_out = false, no_oracle = false;
    std::string sizes = "25,50,100,200,400";

    auto add_instance = [&](CLI::App* c) {
        c->add_option("--instance", in.instance_path, "Instance JSON file");
    };
    auto add_policy = [&](CLI::App* c) {
        c->add_option("--policy", in.policy_path, "Policy dump produced by `solve`");
    };
    auto add_grid = [&](CLI::App* c) {
        c->add_option("--belief", grid.belief, "Single belief point, e.g. 0.9,0.8,1.0");
        c->add_option("--grid-levels", grid.grid_levels, "Uniform levels per precondition (default 11)");
        c->add_option("--levels", grid.levels, "Explicit comma-separated grid levels");
    };
    auto add_out = [&](CLI::App* c) {
        c->add_option("--out", out_path, "Output file")->required();
        c->add_option("--log", log_path, "Run log (default: precmon_runs.jsonl next to --out)");
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
    validate_cmd->add_option("--instance", in.instance_path)->required();
    validate_cmd->add_flag("--json", json_out);

    auto* solve_cmd = app.add_subcommand("solve", "Solve every single-failure subproblem");
    solve_cmd->add_option("--instance", in.instance_path)->required();
    add_out(solve_cmd);
    solve_cmd->add_option("--summary", summary_path, "Summary CSV (default: <out>_summary.csv)");
    add_threads(solve_cmd);

    auto* decide_cmd = app.add_subcommand("decide", "Combined decision at one stage and belief");
    add_policy(decide_cmd);
    add_instance(decide_cmd);
    decide_cmd->add_option("--stage", stage)->required();
    decide_cmd->add_option("--belief", grid.belief)->required();
    decide_cmd->add_option("--combiner", combiner_name)->required();
    decide_cmd->add_flag("--json", json_out);

    auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimal value of the joint problem");
    add_instance(oracle_cmd);
    add_grid(oracle_cmd);
    oracle_cmd->add_option("--stage", stage);
    oracle_cmd->add_option("--depth-guard", depth_guard);
    add_out(oracle_cmd);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Exact expected value of NPC/VAPC policies");
    add_instance(evaluate_cmd);
    add_policy(evaluate_cmd);
    add_grid(evaluate_cmd);
    evaluate_cmd->add_option("--stage", stage);
    evaluate_cmd->add_option("--combiner", combiner_name, "npc, vapc, or both");
    evaluate_cmd->add_option("--node-budget", node_budget);
    add_threads(evaluate_cmd);
    add_out(evaluate_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "Per-point and banded error report");
    add_instance(compare_cmd);
    add_policy(compare_cmd);
    add_grid(compare_cmd);
    compare_cmd->add_option("--band", band, "Band value(s) p");
    compare_cmd->add_option("--side", side, "high, low, or window")
        ->check(CLI::IsMember({"high", "low", "window"}));
    compare_cmd->add_flag("--no-oracle", no_oracle, "Skip the exact optimum");
    compare_cmd->add_option("--depth-guard", depth_guard);
    compare_cmd->add_option("--node-budget", node_budget);
    compare_cmd->add_option("--aggregate", aggregate_path, "Aggregate CSV (default: <out>_aggregate.csv)");
    add_threads(compare_cmd);
    add_out(compare_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate of policy value");
    add_instance(simulate_cmd);
    add_policy(simulate_cmd);
    simulate_cmd->add_option("--belief", grid.belief, "Initial belief (default: instance priors)");
    simulate_cmd->add_option("--combiner", combiner_name, "npc, vapc, or both");
    simulate_cmd->add_option("--episodes", episodes)->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", seed);
    add_threads(simulate_cmd);
    add_out(simulate_cmd);

    auto* scale_cmd = app.add_subcommand("scale", "Solve-time scaling over a generated family");
    scale_cmd->add_option("--instance", in.instance_path, "Base instance")->required();
    scale_cmd->add_option("--sizes", sizes, "Comma-separated stage counts");
    add_out(scale_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto combiners = [&]() -> std::vector<Combiner> {
        if (combiner_name == "both") return {Combiner::npc, Combiner::vapc};
        return {combiner_from_string(combiner_name)};
    };

    try {
        RunLog run;
        run.parameters = {{"stage", std::to_string(stage)}};
        if (log_path.empty() && !out_path.empty()) log_path = default_log(out_path);

        if (*validate_cmd) {
            const auto text = read_file(in.instance_path);
            auto inst = parse_instance(text);
            const auto warns = warnings(inst);
            if (json_out) {
                std::cout << nlohmann::json{{"valid", true},
                                            {"name", inst.name},
                                            {"stages", inst.size()},
                                            {"warnings", warns}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << "ok: " << inst.name << " (" << inst.size() << " stages)\n";
                for (const auto& w : warns) std::cout << "warning: " << w << "\n";
            }
            return 0;
        }

        if (*solve_cmd) {
            run.command = "solve";
            const auto text = read_file(in.instance_path);
            run.digest = sha256_hex(text);
            const auto inst = parse_instance(text);
            std::vector<double> micros;
            const auto bundle = solve_all(inst, threads, &micros);
            if (summary_path.empty()) summary_path = sibling(out_path, "_summary.csv");

            std::string csv = "subproblem,stage,stage_kind,set_size,solve_micros\n";
            for (const auto& sp : bundle.subproblems) {
                for (std::size_t t = 1; t <= sp.precondition; ++t) {
                    for (auto kind : {StageKind::monitoring, StageKind::action}) {
                        const auto& set = kind == StageKind::monitoring ? sp.monitoring_set(t) : sp.action_set(t);
                        csv += std::to_string(sp.precondition) + "," + std::to_string(t) + "," +
                               std::string(to_string(kind)) + "," + std::to_string(set.size()) + "," +
                               fmt(micros[sp.precondition - 1]) + "\n";
                    }
                }
            }
            write_atomic(out_path, serialize_policy(bundle));
            write_atomic(summary_path, csv);
            run.artifacts = {out_path, summary_path};
            run.extra["max_set_size"] = bundle.max_set_size();
            run.append(log_path);
            std::cout << "solved " << inst.size() << " subproblems; largest set " << bundle.max_set_size()
                      << " vectors\n";
            return 0;
        }

        if (*decide_cmd) {
            in.load(true, threads);
            const auto& bundle = *in.bundle;
            const auto b = parse_belief(grid.belief);
            if (b.size() != bundle.size())
                throw InputError("--belief has " + std::to_string(b.size()) + " entries, policy has " +
                                 std::to_string(bundle.size()) + " stages");
            if (stage < 1 || stage > bundle.size()) throw InputError("--stage outside [1,n]");
            const auto combiner = combiner_from_string(combiner_name);
            const auto monitor = npc_monitor(bundle, b, stage);
            const auto act = decide(bundle, b, stage, combiner);
            std::vector<double> monitoring_values;
            for (std::size_t k = stage; k <= bundle.size(); ++k)
                monitoring_values.push_back(evaluate(bundle.subproblem(k).monitoring_set(stage), b[k]).value);

            if (json_out) {
                nlohmann::json j;
                j["stage"] = stage;
                j["combiner"] = to_string(combiner);
                j["monitor_set"] = monitor;
                j["object_action"] = to_string(act.action);
                auto subs = nlohmann::json::array();
                for (std::size_t k = stage; k <= bundle.size(); ++k) {
                    const auto i = k - stage;
                    nlohmann::json s = {{"subproblem", k},
                                        {"belief", b[k]},
                                        {"monitoring_value", monitoring_values[i]},
                                        {"action_choice", to_string(act.choices[i])}};
                    s["action_value"] = std::isnan(act.values[i]) ? nlohmann::json(nullptr)
                                                                  : nlohmann::json(act.values[i]);
                    subs.push_back(std::move(s));
                }
                j["subproblems"] = std::move(subs);
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << "stage " << stage << " (" << to_string(combiner) << ")\n";
                std::cout << "monitor: {" << join_indices(monitor) << "}\n";
                std::cout << "action: " << to_string(act.action) << "\n";
                for (std::size_t k = stage; k <= bundle.size(); ++k) {
                    const auto i = k - stage;
                    std::cout << "  subproblem " << k << ": b=" << fmt(b[k])
                              << " monitoring_value=" << fmt(monitoring_values[i]) << " action_value="
                              << (std::isnan(act.values[i]) ? std::string("-") : fmt(act.values[i]))
                              << " choice=" << to_string(act.choices[i]) << "\n";
                }
            }
            return 0;
        }

        if (*oracle_cmd) {
            run.command = "oracle";
            in.load(false, threads);
            const auto points = grid.points(in.instance.size());
            JointOracle oracle(in.instance, depth_guard);
            std::string csv = point_header(in.instance.size()) + "\n";
            for (const auto& b : points) {
                const double v = oracle.monitoring_value(b, stage);
                csv += point_row(b, v, {}, {}, {}, {}) + "\n";
            }
            write_atomic(out_path, csv);
            run.parameters["depth_guard"] = std::to_string(depth_guard);
            run.digest = in.digest;
            run.artifacts = {out_path};
            run.append(log_path);
            std::cout << "wrote " << points.size() << " oracle values to " << out_path << "\n";
            return 0;
        }

        if (*evaluate_cmd) {
            run.command = "evaluate";
            in.load(true, threads);
            const auto& bundle = *in.bundle;
            const auto points = grid.points(bundle.size());
            const auto which = combiners();
            std::vector<std::optional<double>> npc(points.size()), vapc(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) {
                for (auto c : which) {
                    const double v = evaluate_policy_exact(bundle, points[i], stage, c, node_budget);
                    (c == Combiner::npc ? npc : vapc)[i] = v;
                }
            }
            std::string csv = point_header(bundle.size()) + "\n";
            for (std::size_t i = 0; i < points.size(); ++i)
                csv += point_row(points[i], {}, npc[i], vapc[i], {}, {}) + "\n";
            write_atomic(out_path, csv);
            run.parameters["combiner"] = combiner_name;
            run.parameters["node_budget"] = std::to_string(node_budget);
            run.digest = in.digest;
            run.artifacts = {out_path};
            run.append(log_path);
            std::cout << "wrote " << points.size() << " policy values to " << out_path << "\n";
            return 0;
        }

        if (*compare_cmd) {
            run.command = "compare";
            in.load(true, threads);
            const auto& bundle = *in.bundle;
            const std::size_t n = bundle.size();
            ReportOptions opts;
            opts.with_oracle = !no_oracle;
            opts.depth_guard = depth_guard;
            opts.node_budget = node_budget;
            opts.threads = threads;
            if (aggregate_path.empty()) aggregate_path = sibling(out_path, "_aggregate.csv");

            std::string agg_csv =
                "band,side,count,excluded,mean_rel_err_npc,max_rel_err_npc,mean_rel_err_vapc,"
                "max_rel_err_vapc,mean_improvement,max_improvement,mean_abs_difference\n";
            auto agg_row = [&](const std::string& b, const std::string& s, const Aggregate& a) {
                const bool errs = opts.with_oracle;
                agg_csv += b + "," + s + "," + std::to_string(a.count) + "," + std::to_string(a.excluded) + "," +
                           (errs ? fmt(a.mean_rel_err_npc) : "") + "," + (errs ? fmt(a.max_rel_err_npc) : "") +
                           "," + (errs ? fmt(a.mean_rel_err_vapc) : "") + "," +
                           (errs ? fmt(a.max_rel_err_vapc) : "") + "," + fmt(a.mean_improvement) + "," +
                           fmt(a.max_improvement) + "," + fmt(a.mean_abs_difference) + "\n";
            };

            std::vector<EvaluationPoint> all_points;
            Aggregate headline;
            if (side == "window") {
                if (band.empty()) throw InputError("--side window needs --band p[,p...]");
                for (double p : parse_double_list(band, "band")) {
                    const std::vector<double> lv{p - 0.1, p - 0.05, p};
                    for (double x : lv)
                        if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) throw InputError("window band leaves [0,1]");
                    std::vector<double> clamped;
                    for (double x : lv) clamped.push_back(std::clamp(x, 0.0, 1.0));
                    auto rep = error_report(bundle, belief_grid(n, clamped), opts, {});
                    agg_row(fmt(p), "window", rep.overall);
                    all_points.insert(all_points.end(), rep.points.begin(), rep.points.end());
                }
                std::vector<const EvaluationPoint*> ptrs;
                for (const auto& p : all_points) ptrs.push_back(&p);
                headline = aggregate(ptrs);
            } else {
                auto levels = grid.level_values();
                if (!side.empty()) {
                    if (band.empty()) throw InputError("--side high|low needs --band p");
                    const double p = parse_double_list(band, "band").at(0);
                    std::vector<double> kept;
                    for (double x : levels)
                        if (side == "high" ? x >= p - 1e-9 : x <= p + 1e-9) kept.push_back(x);
                    if (kept.empty()) throw InputError("band leaves no grid levels");
                    levels = std::move(kept);
                }
                auto rep = error_report(bundle, belief_grid(n, levels), opts, levels);
                agg_row("all", "all", rep.overall);
                for (const auto& b : rep.bands)
                    agg_row(fmt(b.band), b.side == BandSide::high ? "high" : "low", b.stats);
                all_points = std::move(rep.points);
                headline = rep.overall;
            }

            std::string csv = point_header(n) + "\n";
            for (const auto& p : all_points)
                csv += point_row(p.belief, p.oracle_value, p.npc_value, p.vapc_value, p.rel_err_npc,
                                 p.rel_err_vapc) + "\n";
            write_atomic(out_path, csv);
            write_atomic(aggregate_path, agg_csv);
            run.parameters["side"] = side;
            run.parameters["band"] = band;
            run.parameters["with_oracle"] = opts.with_oracle ? "true" : "false";
            run.digest = in.digest;
            run.artifacts = {out_path, aggregate_path};
            run.append(log_path);

            std::cout << "points: " << all_points.size() << "\n";
            if (opts.with_oracle) {
                std::cout << "mean relative error: npc " << fmt(headline.mean_rel_err_npc) << ", vapc "
                          << fmt(headline.mean_rel_err_vapc) << "\n";
                std::cout << "max relative error:  npc " << fmt(headline.max_rel_err_npc) << ", vapc "
                          << fmt(headline.max_rel_err_vapc) << "\n";
                if (headline.excluded)
                    std::cout << "excluded (optimal value <= 0): " << headline.excluded << "\n";
            }
            std::cout << "mean vapc improvement over npc: " << fmt(headline.mean_improvement) << "\n";
            return 0;
        }

        if (*simulate_cmd) {
            run.command = "simulate";
            in.load(true, threads);
            const auto& bundle = *in.bundle;
            const auto b = grid.belief.empty() ? FactoredBelief(bundle.instance.priors()) : grid.points(bundle.size()).at(0);
            std::optional<double> npc, vapc, npc_se, vapc_se;
            for (auto c : combiners()) {
                const auto r = simulate(bundle, b, c, episodes, seed, threads);
                (c == Combiner::npc ? npc : vapc) = r.mean;
                (c == Combiner::npc ? npc_se : vapc_se) = r.std_error;
            }
            std::string csv = point_header(bundle.size()) + ",npc_std_error,vapc_std_error,episodes\n";
            csv += point_row(b, {}, npc, vapc, {}, {}) + "," + fmt(npc_se) + "," + fmt(vapc_se) + "," +
                   std::to_string(episodes) + "\n";
            write_atomic(out_path, csv);
            run.parameters["episodes"] = std::to_string(episodes);
            run.parameters["seed"] = std::to_string(seed);
            run.parameters["combiner"] = combiner_name;
            run.digest = in.digest;
            run.artifacts = {out_path};
            run.append(log_path);
            if (npc) std::cout << "npc:  " << fmt(*npc) << " +/- " << fmt(*npc_se) << "\n";
            if (vapc) std::cout << "vapc: " << fmt(*vapc) << " +/- " << fmt(*vapc_se) << "\n";
            return 0;
        }

        if (*scale_cmd) {
            run.command = "scale";
            const auto text = read_file(in.instance_path);
            run.digest = sha256_hex(text);
            const auto base = parse_instance(text);
            std::vector<std::size_t> ns;
            for (double v : parse_double_list(sizes, "size")) {
                if (v < 1 || v != std::floor(v)) throw InputError("--sizes entries must be positive integers");
                ns.push_back(static_cast<std::size_t>(v));
            }
            const auto detail_path = sibling(out_path, "_subproblems.csv");
            std::string csv = "n,total_solve_micros,max_set_size\n";
            std::string detail = "n,subproblem,solve_micros,cumulative_micros\n";
            std::vector<double> xs, ys;
            for (std::size_t n : ns) {
                const auto inst = generate_scaling_family(base, n);
                std::vector<double> micros;
                const auto start = std::chrono::steady_clock::now();
                const auto bundle = solve_all(inst, 1, &micros);
                const double total =
                    std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - start).count();
                csv += std::to_string(n) + "," + fmt(total) + "," + std::to_string(bundle.max_set_size()) + "\n";
                double cumulative = 0.0;
                for (std::size_t k = 1; k <= n; ++k) {
                    cumulative += micros[k - 1];
                    detail += std::to_string(n) + "," + std::to_string(k) + "," + fmt(micros[k - 1]) + "," +
                              fmt(cumulative) + "\n";
                }
                xs.push_back(static_cast<double>(n));
                ys.push_back(total);
            }
            write_atomic(out_path, csv);
            write_atomic(detail_path, detail);
            run.parameters["sizes"] = sizes;
            run.artifacts = {out_path, detail_path};
            if (xs.size() >= 2) run.extra["loglog_slope"] = loglog_slope(xs, ys);
            run.append(log_path);
            std::cout << csv;
            if (xs.size() >= 2) std::cout << "log-log slope: " << fmt(loglog_slope(xs, ys)) << "\n";
            return 0;
        }
    } catch (const RefusalError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
