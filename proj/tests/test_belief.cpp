#include <doctest.h>

#include <random>

#include "precmon/belief.hpp"
#include "precmon/errors.hpp"

using namespace precmon;

TEST_CASE("observe_update") {
    const SensorModel s{0.3, 0.1};
    // 0.5 * 0.9 / (0.5 * 0.9 + 0.5 * 0.3)
    CHECK(observe_update(0.5, s, Report::holds) == doctest::Approx(0.75));
    CHECK(observe_update(1.0, s, Report::holds) == 1.0);
    CHECK(observe_update(0.5, SensorModel{0.5, 0.5}, Report::failed) == doctest::Approx(0.5));
    // 0.5 * 0.1 / (0.5 * 0.1 + 0.5 * 0.7)
    CHECK(observe_update(0.5, s, Report::failed) == doctest::Approx(0.125));
}

TEST_CASE("impossible observation is an error") {
    CHECK_THROWS_AS(observe_update(1.0, SensorModel{0.3, 0.0}, Report::failed), ImpossibleObservation);
    CHECK_THROWS_AS(observe_update(0.0, SensorModel{0.0, 0.1}, Report::holds), ImpossibleObservation);
}

TEST_CASE("transition_update") {
    CHECK(transition_update(1.0, {0.01, 0.0}) == doctest::Approx(0.99));
    CHECK(transition_update(0.0, {0.01, 0.0}) == 0.0);
    CHECK(transition_update(0.5, {0.05, 0.1}) == doctest::Approx(0.525));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double b = u(rng);
        CHECK(transition_update(b, {0.0, 0.0}) == b);
    }
}

TEST_CASE("report_likelihood") {
    CHECK(report_likelihood(1.0, {0.3, 0.1}, Report::failed) == doctest::Approx(0.1));
    CHECK(report_likelihood(0.5, {0.3, 0.1}, Report::holds) == doctest::Approx(0.6));
}

TEST_CASE("belief update properties") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        const double b = u(rng);
        const SensorModel s{u(rng), u(rng)};
        const TransitionModel tr{u(rng), u(rng)};
        double total = 0.0, mass = 0.0;
        for (Report r : {Report::holds, Report::failed}) {
            const double like = report_likelihood(b, s, r);
            mass += like;
            if (like == 0.0) continue;
            const double post = observe_update(b, s, r);
            CHECK(post >= 0.0);
            CHECK(post <= 1.0);
            total += like * post;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(total - b) < 1e-12);
        const double next = transition_update(b, tr);
        CHECK(next >= 0.0);
        CHECK(next <= 1.0);
    }
}

TEST_CASE("factored belief") {
    MonitoringInstance inst;
    inst.plan_value = 1;
    for (int i = 0; i < 3; ++i) inst.stages.push_back(StageSpec{1, 0, 0, {0.3, 0.1}, {0.1, 0.0}, 1.0});

    FactoredBelief b({0.5, 1.0, 0.8});
    b.observe(1, inst.stage(1).sensor, Report::holds);
    CHECK(b[1] == doctest::Approx(0.75));
    b.advance_past(1, inst);
    CHECK(b[1] == doctest::Approx(0.75));  // executed step is untouched
    CHECK(b[2] == doctest::Approx(0.9));
    CHECK(b[3] == doctest::Approx(0.72));

    CHECK(parse_belief("0.9,0.8,1.0") == FactoredBelief({0.9, 0.8, 1.0}));
    CHECK(parse_belief(" 0.5 , 1 ") == FactoredBelief({0.5, 1.0}));
    CHECK_THROWS_AS(parse_belief("0.9,,1"), InputError);
    CHECK_THROWS_AS(parse_belief("0.9,abc"), InputError);
    CHECK_THROWS_AS(parse_belief("1.2"), InputError);
    CHECK_THROWS_AS(FactoredBelief({-0.1}), ContractError);
}
