#include <doctest.h>

#include <random>

#include "precmon/errors.hpp"
#include "precmon/joint.hpp"
#include "test_support.hpp"

using namespace precmon;
using precmon::testing::data_path;

namespace {

// Joint instance in which only precondition k can be uncertain: the others
// never fail, start certain, and are too costly to be worth a report.
MonitoringInstance single_failure_embedding(const MonitoringInstance& base, std::size_t k) {
    MonitoringInstance inst = base;
    for (std::size_t i = 1; i <= inst.size(); ++i) {
        if (i == k) continue;
        auto& s = inst.stages[i - 1];
        s.transition = {0.0, 0.0};
        s.prior = 1.0;
        s.monitor_cost = 1e6;
    }
    return inst;
}

}  // namespace

TEST_CASE("oracle at the last stage") {
    const auto inst = load_instance(data_path("easy3.json"));
    CHECK(oracle_value(inst, FactoredBelief({1.0, 1.0, 0.05}), 3) == doctest::Approx(4.0));
    CHECK(oracle_value(inst, FactoredBelief({1.0, 1.0, 1.0}), 3) == doctest::Approx(20.0));
    CHECK(oracle_value(inst, FactoredBelief({1.0, 1.0, 0.0}), 3) == doctest::Approx(4.0));
}

TEST_CASE("oracle with every precondition certain") {
    const auto inst = load_instance(data_path("easy3.json"));
    // Still exposed to spontaneous failure of later preconditions.
    JointOracle oracle(inst);
    const double v = oracle.monitoring_value(FactoredBelief({1.0, 1.0, 1.0}), 1);
    CHECK(v <= 20.0);
    CHECK(v > 19.0);
    auto perfect = inst;
    for (auto& s : perfect.stages) s.transition = {0.0, 0.0};
    CHECK(oracle_value(perfect, FactoredBelief({1.0, 1.0, 1.0}), 1) == doctest::Approx(20.0));
    CHECK(oracle_value(perfect, FactoredBelief({0.0, 1.0, 1.0}), 1) == doctest::Approx(12.0));
}

TEST_CASE("single-failure embedding matches the subproblem value") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto base = precmon::testing::random_instance(rng, 1 + trial % 4);
        const std::size_t n = base.size();
        const std::size_t k = 1 + trial % n;
        const auto inst = single_failure_embedding(base, k);
        const auto sp = solve_subproblem(inst, k);
        JointOracle oracle(inst, 6);
        for (int j = 0; j < 10; ++j) {
            std::vector<double> probs(n, 1.0);
            probs[k - 1] = u(rng);
            const double dp = evaluate(sp.monitoring_set(1), probs[k - 1]).value;
            CHECK(std::abs(oracle.monitoring_value(FactoredBelief(probs), 1) - dp) < 1e-9);
        }
    }
}

TEST_CASE("oracle dominates both combiners") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = precmon::testing::random_instance(rng, 3);
        const auto bundle = solve_all(inst);
        for (int j = 0; j < 10; ++j) {
            const FactoredBelief b({u(rng), u(rng), u(rng)});
            const double opt = oracle_value(inst, b, 1);
            CHECK(evaluate_policy_exact(bundle, b, 1, Combiner::npc) <= opt + 1e-9);
            CHECK(evaluate_policy_exact(bundle, b, 1, Combiner::vapc) <= opt + 1e-9);
        }
    }
}

TEST_CASE("oracle value falls as monitoring gets dearer") {
    auto inst = load_instance(data_path("easy3.json"));
    const FactoredBelief b({0.6, 0.7, 0.8});
    double prev = oracle_value(inst, b, 1);
    for (double scale : {2.0, 4.0, 8.0}) {
        auto dear = inst;
        for (auto& s : dear.stages) s.monitor_cost *= scale;
        const double v = oracle_value(dear, b, 1);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("oracle action values") {
    const auto inst = load_instance(data_path("easy3.json"));
    JointOracle oracle(inst);
    const auto v = oracle.action_values(FactoredBelief({0.1, 1.0, 1.0}), 1);
    CHECK(v.abandon == 12.0);
    CHECK(v.best() == v.abandon);
    CHECK(oracle.memo_size() > 0);
}

TEST_CASE("policy evaluation of trivial policies") {
    auto inst = load_instance(data_path("easy3.json"));
    for (auto& s : inst.stages) s.transition = {0.0, 0.0};
    const auto bundle = solve_all(inst);
    for (auto c : {Combiner::npc, Combiner::vapc}) {
        CHECK(evaluate_policy_exact(bundle, FactoredBelief({1.0, 1.0, 1.0}), 1, c) == doctest::Approx(20.0));
        CHECK(evaluate_policy_exact(bundle, FactoredBelief({0.0, 1.0, 1.0}), 1, c) == doctest::Approx(12.0));
    }
}

TEST_CASE("simulation is reproducible and agrees with exact evaluation") {
    const auto bundle = solve_all(load_instance(data_path("easy3.json")));
    const FactoredBelief b({0.7, 0.8, 0.9});
    const auto a = simulate(bundle, b, Combiner::npc, 20000, 7);
    const auto a2 = simulate(bundle, b, Combiner::npc, 20000, 7, 3);
    CHECK(a.mean == a2.mean);
    CHECK(a.std_error == a2.std_error);
    CHECK(a.episodes == 20000);
    const auto other = simulate(bundle, b, Combiner::npc, 20000, 8);
    CHECK(other.mean != a.mean);
    const double exact = evaluate_policy_exact(bundle, b, 1, Combiner::npc);
    CHECK(std::abs(a.mean - exact) < 4 * a.std_error);
}

TEST_CASE("simulation of a deterministic episode has zero spread") {
    auto inst = load_instance(data_path("easy3.json"));
    for (auto& s : inst.stages) s.transition = {0.0, 0.0};
    const auto bundle = solve_all(inst);
    const auto r = simulate(bundle, FactoredBelief({1.0, 1.0, 1.0}), Combiner::vapc, 5000, 1);
    CHECK(r.mean == 20.0);
    CHECK(r.std_error == 0.0);
    CHECK_THROWS_AS(simulate(bundle, FactoredBelief({1.0, 1.0, 1.0}), Combiner::npc, 0, 1), ContractError);
}

TEST_CASE("belief grids") {
    CHECK(belief_grid(3, uniform_levels(11)).size() == 1331);
    CHECK(belief_grid(1, uniform_levels(2)).size() == 2);
    CHECK(belief_grid(5, uniform_levels(3)).size() == 243);
    const auto g = belief_grid(2, {0.0, 1.0});
    REQUIRE(g.size() == 4);
    CHECK(g[1] == FactoredBelief({0.0, 1.0}));
    CHECK(g[2] == FactoredBelief({1.0, 0.0}));
    CHECK_THROWS_AS(uniform_levels(1), InputError);
    CHECK_THROWS_AS(uniform_levels(0), InputError);
    CHECK_THROWS_AS(belief_grid(2, {0.5, 1.5}), InputError);
    const auto lv = uniform_levels(5);
    CHECK(lv.front() == 0.0);
    CHECK(lv.back() == 1.0);
    CHECK(lv[2] == 0.5);
}

TEST_CASE("guards refuse oversized computations") {
    const auto inst = load_instance(data_path("five.json"));
    try {
        oracle_value(inst, FactoredBelief(inst.priors()), 1, 3);
        FAIL("expected refusal");
    } catch (const RefusalError& e) {
        CHECK(e.flag() == "--depth-guard");
    }
    CHECK_NOTHROW(oracle_value(inst, FactoredBelief(inst.priors()), 3, 3));

    const auto bundle = solve_all(inst);
    try {
        evaluate_policy_exact(bundle, FactoredBelief({0.5, 0.5, 0.5, 0.5, 0.5}), 1, Combiner::npc, 5);
        FAIL("expected refusal");
    } catch (const RefusalError& e) {
        CHECK(e.flag() == "--node-budget");
    }
}

TEST_CASE("error report with no spontaneous failure and certain beliefs") {
    auto inst = load_instance(data_path("easy3.json"));
    for (auto& s : inst.stages) s.transition = {0.0, 0.0};
    const auto bundle = solve_all(inst);
    const auto report = error_report(bundle, belief_grid(3, {0.0, 1.0}), {}, {0.0, 1.0});
    CHECK(report.points.size() == 8);
    CHECK(report.overall.max_rel_err_npc == doctest::Approx(0.0));
    CHECK(report.overall.max_rel_err_vapc == doctest::Approx(0.0));
    REQUIRE(report.bands.size() == 4);
    CHECK(report.bands[0].side == BandSide::high);
    CHECK(report.bands[0].stats.count == 8);
    CHECK(report.bands[1].stats.count == 1);
    CHECK(report.bands[2].side == BandSide::low);
    CHECK(report.bands[2].stats.count == 1);
}

TEST_CASE("aggregate arithmetic") {
    EvaluationPoint a, b, c;
    a.oracle_value = 10;
    a.npc_value = 8;
    a.vapc_value = 9;
    a.rel_err_npc = 0.2;
    a.rel_err_vapc = 0.1;
    b.oracle_value = 10;
    b.npc_value = 10;
    b.vapc_value = 10;
    b.rel_err_npc = 0.0;
    b.rel_err_vapc = 0.0;
    c.oracle_value = 0;
    c.npc_value = 0;
    c.vapc_value = 0;
    const auto agg = aggregate({&a, &b, &c});
    CHECK(agg.count == 3);
    CHECK(agg.excluded == 1);
    CHECK(agg.mean_rel_err_npc == doctest::Approx(0.1));
    CHECK(agg.max_rel_err_npc == doctest::Approx(0.2));
    CHECK(agg.mean_rel_err_vapc == doctest::Approx(0.05));
    CHECK(agg.mean_improvement == doctest::Approx(0.0625));
    CHECK(agg.max_improvement == doctest::Approx(0.125));
    CHECK(agg.mean_abs_difference == doctest::Approx(1.0 / 3.0));
}
