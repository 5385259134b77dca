#include <doctest.h>

#include <random>

#include "precmon/combine.hpp"
#include "precmon/errors.hpp"
#include "precmon/policy_io.hpp"
#include "test_support.hpp"

using namespace precmon;
using precmon::testing::data_path;

TEST_CASE("policy round trip preserves every vector") {
    for (const char* file : {"easy3.json", "hard3.json", "five.json"}) {
        const auto bundle = solve_all(load_instance(data_path(file)));
        const auto back = parse_policy(serialize_policy(bundle));
        CHECK(back.instance == bundle.instance);
        REQUIRE(back.size() == bundle.size());
        for (std::size_t k = 1; k <= bundle.size(); ++k) {
            for (std::size_t t = 1; t <= k; ++t) {
                CHECK(back.subproblem(k).action_set(t).vectors == bundle.subproblem(k).action_set(t).vectors);
                CHECK(back.subproblem(k).monitoring_set(t).vectors ==
                      bundle.subproblem(k).monitoring_set(t).vectors);
            }
        }
        CHECK(serialize_policy(back) == serialize_policy(bundle));
    }
}

TEST_CASE("reloaded policy makes identical decisions") {
    const auto bundle = solve_all(load_instance(data_path("five.json")));
    const auto back = parse_policy(serialize_policy(bundle));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const FactoredBelief b({u(rng), u(rng), u(rng), u(rng), u(rng)});
        for (std::size_t t = 1; t <= 5; ++t) {
            CHECK(npc_monitor(bundle, b, t) == npc_monitor(back, b, t));
            CHECK(npc_action(bundle, b, t) == npc_action(back, b, t));
            CHECK(vapc_action(bundle, b, t) == vapc_action(back, b, t));
        }
    }
}

TEST_CASE("malformed policies are rejected") {
    const auto good = serialize_policy(solve_all(load_instance(data_path("easy3.json"))));
    CHECK_THROWS_AS(parse_policy("{"), InputError);
    CHECK_THROWS_AS(parse_policy("[]"), InputError);
    CHECK_THROWS_AS(parse_policy(R"({"format":"something-else","version":1})"), InputError);

    auto replace = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        const auto pos = s.find(from);
        REQUIRE(pos != std::string::npos);
        s.replace(pos, from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(parse_policy(replace("\"version\": 1", "\"version\": 7")), InputError);
    CHECK_THROWS_AS(parse_policy(replace("\"continue\"", "\"sprint\"")), InputError);
    CHECK_THROWS_AS(parse_policy(replace("\"subproblems\"", "\"subproblemz\"")), InputError);
    CHECK_THROWS_AS(load_policy("/nonexistent/policy.json"), InputError);
}
