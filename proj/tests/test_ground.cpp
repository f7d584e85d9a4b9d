#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "koszulkit/ground.hpp"

#include <random>

using namespace kk;

static std::vector<GenSpec> hopf_lc() {
    return {{"c1", "1", "1", -2}, {"c2", "2", "2", -2}, {"c12", "1", "2", -1},
            {"c21", "2", "1", -1}, {"s1", "1", "1", -1}, {"t1", "1", "1", -1},
            {"k1", "1", "1", -2},  {"l1", "1", "1", -2}, {"u1", "1", "1", -3}};
}

TEST_CASE("build_ground") {
    auto [k, m] = build_ground({"1", "2"}, {'+', '-'}, hopf_lc());
    CHECK(k.size() == 2);
    CHECK(m.generators.size() == 9);
    CHECK(m.generators[m.find("c12")].src == 0);
    CHECK(m.generators[m.find("c12")].dst == 1);

    auto [k0, m0] = build_ground({"1"}, {'-'}, {});
    CHECK(m0.generators.empty());

    CHECK_THROWS_AS(build_ground({"1"}, {'-'}, {{"x", "9", "1", 0}}), ground_error);
    CHECK_THROWS_AS(build_ground({"1"}, {'-'}, {{"x", "1", "1", 0}, {"x", "1", "1", 1}}), ground_error);
    CHECK_THROWS_AS(build_ground({"1", "1"}, {'-', '-'}, {}), ground_error);
}

TEST_CASE("dual_module") {
    auto [k, m] = build_ground({"1", "2"}, {'+', '-'}, hopf_lc());
    auto d = dual_module(m, Side::Left);
    CHECK(d.generators[d.find("c12v")].degree == 1);
    CHECK(d.generators[d.find("u1v")].degree == 3);
    CHECK(d.generators[d.find("c12v")].src == 1);
    CHECK(d.generators[d.find("c12v")].dst == 0);

    GradedModule ground_only;
    CHECK(dual_module(ground_only, Side::Right).generators.empty());

    auto dd = dual_module(d, Side::Right);
    CHECK(dd.generators == m.generators);
}

TEST_CASE("module predicates") {
    auto [k, m] = build_ground({"1", "2"}, {'+', '-'}, hopf_lc());
    auto p = module_predicates(m, 2);
    CHECK(p.connected);
    CHECK(!p.simply_connected);
    CHECK(p.locally_finite);

    auto [k2, sc] = build_ground({"1"}, {'-'}, {{"a", "1", "1", -2}, {"b", "1", "1", -3}});
    CHECK(module_predicates(sc, 1).simply_connected);

    auto [k3, nc] = build_ground({"1"}, {'-'}, {{"a", "1", "1", 0}, {"b", "1", "1", -1}, {"c", "1", "1", -2}});
    CHECK(!module_predicates(nc, 1).connected);

    auto [k4, mixed] = build_ground({"1"}, {'-'}, {{"a", "1", "1", 2}, {"b", "1", "1", -2}});
    CHECK(!module_predicates(mixed, 1).connected);
}

TEST_CASE("grading conversions") {
    CHECK(leg_from_degree(-2) == 1);
    for (int c = -50; c <= 50; ++c) {
        CHECK(cz_from_degree(degree_from_cz(c)) == c);
        CHECK(degree_from_cz(cz_from_degree(c)) == c);
        CHECK(degree_from_leg(leg_from_degree(c)) == c);
    }
}

TEST_CASE("dimension formulas") {
    DimQuery sy{DimFormula::Sy, 3, {}, {{-3, +1}}, {}};
    CHECK(formal_dimension(sy) == 4);
    DimQuery fi{DimFormula::Fi, 2, {-2}, {}, {}};
    CHECK(formal_dimension(fi) == 1);
    CHECK_THROWS_AS(parse_dim_formula("nope"), ground_error);
    CHECK(parse_dim_formula("co-bar") == DimFormula::CoBar);
    // a rigid disk in the symplectization: one positive puncture of degree n-2+... check a known zero
    DimQuery co{DimFormula::Co, 3, {1}, {}, {-1}};
    CHECK(formal_dimension(co) == 1);
}
