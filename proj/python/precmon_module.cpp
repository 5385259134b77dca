#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "precmon/belief.hpp"
#include "precmon/combine.hpp"
#include "precmon/errors.hpp"
#include "precmon/joint.hpp"
#include "precmon/model.hpp"
#include "precmon/policy_io.hpp"
#include "precmon/pwlc.hpp"
#include "precmon/solver.hpp"

namespace py = pybind11;
using namespace precmon;

namespace {

FactoredBelief to_belief(const std::vector<double>& b) { return FactoredBelief(b); }

std::vector<double> from_belief(const FactoredBelief& b) { return {b.probs().begin(), b.probs().end()}; }

}  // namespace

PYBIND11_MODULE(_precmon, m) {
    m.doc() = "Decision-theoretic plan precondition monitoring";
    m.attr("__version__") = "0.1.0";

    auto base = py::register_exception<Error>(m, "PrecmonError", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ContractError>(m, "ContractError", base.ptr());
    py::register_exception<ImpossibleObservation>(m, "ImpossibleObservation", base.ptr());
    py::register_exception<RefusalError>(m, "RefusalError", base.ptr());

    py::enum_<Report>(m, "Report").value("holds", Report::holds).value("failed", Report::failed);
    py::enum_<Action>(m, "Action")
        .value("cont", Action::cont)
        .value("abandon", Action::abandon)
        .value("monitor", Action::monitor)
        .value("skip", Action::skip);
    py::enum_<Combiner>(m, "Combiner").value("npc", Combiner::npc).value("vapc", Combiner::vapc);

    py::class_<SensorModel>(m, "SensorModel")
        .def(py::init<>())
        .def(py::init([](double fp, double fn) { return SensorModel{fp, fn}; }), py::arg("false_positive"),
             py::arg("false_negative"))
        .def_readwrite("false_positive", &SensorModel::false_positive)
        .def_readwrite("false_negative", &SensorModel::false_negative)
        .def_property_readonly("informative", &SensorModel::informative);

    py::class_<TransitionModel>(m, "TransitionModel")
        .def(py::init<>())
        .def(py::init([](double pf, double pr) { return TransitionModel{pf, pr}; }), py::arg("p_fail"),
             py::arg("p_repair"))
        .def_readwrite("p_fail", &TransitionModel::p_fail)
        .def_readwrite("p_repair", &TransitionModel::p_repair);

    py::class_<StageSpec>(m, "StageSpec")
        .def(py::init<>())
        .def_readwrite("alt_value", &StageSpec::alt_value)
        .def_readwrite("fail_value", &StageSpec::fail_value)
        .def_readwrite("monitor_cost", &StageSpec::monitor_cost)
        .def_readwrite("sensor", &StageSpec::sensor)
        .def_readwrite("transition", &StageSpec::transition)
        .def_readwrite("prior", &StageSpec::prior);

    py::class_<MonitoringInstance>(m, "MonitoringInstance")
        .def(py::init<>())
        .def_readwrite("name", &MonitoringInstance::name)
        .def_readwrite("plan_value", &MonitoringInstance::plan_value)
        .def_readwrite("stages", &MonitoringInstance::stages)
        .def_property_readonly("priors", &MonitoringInstance::priors)
        .def("__len__", &MonitoringInstance::size)
        .def("__eq__", [](const MonitoringInstance& a, const MonitoringInstance& b) { return a == b; });

    m.def("load_instance", [](const std::string& path) { return load_instance(path); }, py::arg("path"));
    m.def("parse_instance", &parse_instance, py::arg("text"));
    m.def("serialize_instance", &serialize_instance, py::arg("instance"));
    m.def("validate", &validate, py::arg("instance"));
    m.def("warnings", &warnings, py::arg("instance"));
    m.def("myopic_evoi", &myopic_evoi, py::arg("p_fail_by"), py::arg("v_alt"), py::arg("v_fail"));
    m.def("generate_scaling_family", &generate_scaling_family, py::arg("base"), py::arg("n"));

    m.def("observe_update", &observe_update, py::arg("b"), py::arg("sensor"), py::arg("report"));
    m.def("transition_update", &transition_update, py::arg("b"), py::arg("transition"));
    m.def("report_likelihood", &report_likelihood, py::arg("b"), py::arg("sensor"), py::arg("report"));

    py::class_<AlphaVector>(m, "AlphaVector")
        .def(py::init([](double v_ok, double v_fail, Action a, double p_ok, double p_fail) {
                 return AlphaVector{v_ok, v_fail, a, p_ok, p_fail};
             }),
             py::arg("v_ok"), py::arg("v_fail"), py::arg("action") = Action::cont, py::arg("p_ok") = 0.0,
             py::arg("p_fail_reach") = 0.0)
        .def_readwrite("v_ok", &AlphaVector::v_ok)
        .def_readwrite("v_fail", &AlphaVector::v_fail)
        .def_readwrite("action", &AlphaVector::action)
        .def_readwrite("p_ok", &AlphaVector::p_ok)
        .def_readwrite("p_fail_reach", &AlphaVector::p_fail_reach)
        .def("value", &AlphaVector::value)
        .def("__repr__", [](const AlphaVector& v) {
            return "AlphaVector(" + std::to_string(v.v_ok) + ", " + std::to_string(v.v_fail) + ", " +
                   std::string(to_string(v.action)) + ")";
        });

    m.def("prune_envelope", [](const std::vector<AlphaVector>& vs) { return prune_envelope({vs}).vectors; },
          py::arg("vectors"));
    m.def("evaluate_set",
          [](const std::vector<AlphaVector>& vs, double b) {
              VectorSet set{vs};
              const auto ev = evaluate(set, b);
              return py::make_tuple(ev.value, *ev.argmax);
          },
          py::arg("vectors"), py::arg("b"));
    m.def("terminal_set", [](double plan, double fail, double alt) { return terminal_set(plan, fail, alt).vectors; },
          py::arg("plan_value"), py::arg("fail_value"), py::arg("alt_value"));

    py::class_<PolicyBundle>(m, "PolicyBundle")
        .def_readonly("instance", &PolicyBundle::instance)
        .def("__len__", &PolicyBundle::size)
        .def("max_set_size", &PolicyBundle::max_set_size)
        .def("monitoring_set",
             [](const PolicyBundle& b, std::size_t k, std::size_t t) {
                 return b.subproblem(k).monitoring_set(t).vectors;
             },
             py::arg("k"), py::arg("t"))
        .def("action_set",
             [](const PolicyBundle& b, std::size_t k, std::size_t t) { return b.subproblem(k).action_set(t).vectors; },
             py::arg("k"), py::arg("t"))
        .def("to_json", &serialize_policy);

    m.def("solve_all", [](const MonitoringInstance& inst, unsigned threads) { return solve_all(inst, threads); },
          py::arg("instance"), py::arg("threads") = 1);
    m.def("load_policy", [](const std::string& path) { return load_policy(path); }, py::arg("path"));
    m.def("parse_policy", &parse_policy, py::arg("text"));

    m.def("npc_monitor",
          [](const PolicyBundle& b, const std::vector<double>& belief, std::size_t t) {
              return npc_monitor(b, to_belief(belief), t);
          },
          py::arg("bundle"), py::arg("belief"), py::arg("t"));
    m.def("npc_action",
          [](const PolicyBundle& b, const std::vector<double>& belief, std::size_t t) {
              return npc_action(b, to_belief(belief), t);
          },
          py::arg("bundle"), py::arg("belief"), py::arg("t"));
    m.def("vapc_action",
          [](const PolicyBundle& b, const std::vector<double>& belief, std::size_t t) {
              return vapc_action(b, to_belief(belief), t);
          },
          py::arg("bundle"), py::arg("belief"), py::arg("t"));
    m.def("run_step",
          [](const PolicyBundle& b, const std::vector<double>& belief, std::size_t t, Combiner c,
             const std::function<Report(std::size_t)>& observe) {
              const auto step = run_step(b, to_belief(belief), t, c, observe);
              return py::make_tuple(step.monitor_set, step.object_action, from_belief(step.posterior));
          },
          py::arg("bundle"), py::arg("belief"), py::arg("t"), py::arg("combiner"), py::arg("observe"));

    m.def("oracle_value",
          [](const MonitoringInstance& inst, const std::vector<double>& belief, std::size_t t, std::size_t guard) {
              return oracle_value(inst, to_belief(belief), t, guard);
          },
          py::arg("instance"), py::arg("belief"), py::arg("t") = 1, py::arg("depth_guard") = kDefaultDepthGuard);
    m.def("evaluate_policy_exact",
          [](const PolicyBundle& b, const std::vector<double>& belief, std::size_t t, Combiner c,
             std::uint64_t budget) { return evaluate_policy_exact(b, to_belief(belief), t, c, budget); },
          py::arg("bundle"), py::arg("belief"), py::arg("t"), py::arg("combiner"),
          py::arg("node_budget") = kDefaultNodeBudget);
    m.def("simulate",
          [](const PolicyBundle& b, const std::vector<double>& belief, Combiner c, std::uint64_t episodes,
             std::uint64_t seed) {
              const auto r = simulate(b, to_belief(belief), c, episodes, seed);
              return py::make_tuple(r.mean, r.std_error);
          },
          py::arg("bundle"), py::arg("belief"), py::arg("combiner"), py::arg("episodes"), py::arg("seed"));
    m.def("belief_grid",
          [](std::size_t n, const std::vector<double>& levels) {
              std::vector<std::vector<double>> out;
              for (const auto& b : belief_grid(n, levels)) out.push_back(from_belief(b));
              return out;
          },
          py::arg("n"), py::arg("levels"));
    m.def("uniform_levels", &uniform_levels, py::arg("count"));
}
