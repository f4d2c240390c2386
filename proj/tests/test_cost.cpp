#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "treedist/cost.hpp"

using namespace treedist;

TEST_SUITE_BEGIN("cost");

TEST_CASE("unit cost") {
    CostFunction c = CostFunction::unit();
    CHECK(c.scale() == 1);
    CHECK(c.sub("a", "a") == 0);
    CHECK(c.sub("a", "b") == 1);
    CHECK(c.del("a") == 1);
    CHECK(c.ins("b") == 1);
}

TEST_CASE("unit cost is a metric") {
    CostFunction c = CostFunction::unit();
    CHECK(validate_metric(c, {"a", "b", "c", "d"}).empty());
}

TEST_CASE("validate_metric reports constructed violations") {
    std::istringstream big_sub(
        "scale 1\n"
        "sub a b 5\n"
        "default-sub 1\ndefault-del 1\ndefault-ins 1\n");
    CostFunction c1 = CostFunction::load(big_sub);
    auto v1 = validate_metric(c1, {"a", "b"});
    REQUIRE_FALSE(v1.empty());
    bool found = false;
    for (const auto& msg : v1)
        if (msg.find("sub(a,b) > del(a)+ins(b)") != std::string::npos) found = true;
    CHECK(found);

    // Asymmetric substitution: only possible via two explicit entries.
    std::istringstream asym(
        "scale 1\n"
        "sub a b 1\n"
        "sub b a 2\n"
        "default-sub 1\ndefault-del 2\ndefault-ins 2\n");
    CostFunction c2 = CostFunction::load(asym);
    auto v2 = validate_metric(c2, {"a", "b"});
    REQUIRE_FALSE(v2.empty());
    found = false;
    for (const auto& msg : v2)
        if (msg.find("!= sub(") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("pair_weight") {
    CostFunction c = CostFunction::unit();
    CHECK(c.pair_weight("a", "a") == 2);
    CHECK(c.pair_weight("a", "b") == 1);

    std::istringstream boundary(
        "scale 1\n"
        "sub a b 2\n"
        "default-sub 1\ndefault-del 1\ndefault-ins 1\n");
    CostFunction cb = CostFunction::load(boundary);
    CHECK(cb.pair_weight("a", "b") == 0);

    std::istringstream nonmetric(
        "scale 1\n"
        "sub a b 9\n"
        "default-sub 1\ndefault-del 1\ndefault-ins 1\n");
    CostFunction cn = CostFunction::load(nonmetric);
    CHECK_THROWS_AS(cn.pair_weight("a", "b"), std::logic_error);
    cn.set_clamp_negative_weights(true);
    CHECK(cn.pair_weight("a", "b") == 0);
}

TEST_CASE("mapping_cost examples") {
    CostFunction c = CostFunction::unit();
    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b,d)");
    CHECK(mapping_cost(c, t1, t2, {}) == 6);
    CHECK(mapping_cost(c, t1, t2, {{0, 0}, {1, 1}, {2, 2}}) == 1);
    Tree same = parse_bracket("a(b,c)");
    CHECK(mapping_cost(c, t1, same, {{0, 0}, {1, 1}, {2, 2}}) == 0);
    CHECK_THROWS_AS(mapping_cost(c, t1, t2, {{0, 9}}), std::out_of_range);
}

TEST_CASE("distance_from_weight") {
    CostFunction c = CostFunction::unit();
    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b,d)");
    CHECK(total_delete_insert(c, t1, t2) == 6);
    CHECK(distance_from_weight(c, t1, t2, 0) == 6);
    CHECK(distance_from_weight(c, t1, t2, 5) == 1);
    Tree s1 = parse_bracket("a(b(c))");
    CHECK(distance_from_weight(c, s1, s1, 6) == 0);
    CHECK_THROWS_AS(distance_from_weight(c, t1, t2, 100), std::logic_error);
}

TEST_CASE("objective rewrite identity on random injections") {
    // cost(M) + sum of pair weights over M == total deletions + insertions,
    // for every one-to-one mapping.
    CostFunction c = CostFunction::unit();
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 10), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 10), 0, 3);
        Mapping m = testsupport::random_injection(rng, t1, t2);
        CostValue lhs = mapping_cost(c, t1, t2, m);
        for (auto [x, y] : m) lhs += c.pair_weight(t1.label(x), t2.label(y));
        CHECK(lhs == total_delete_insert(c, t1, t2));
    }
}

TEST_CASE("cost file loading") {
    std::istringstream in(
        "# comment line\n"
        "scale 2\n"
        "sub a b 1\n"
        "del a 3\n"
        "ins b 4\n"
        "default-sub 2\n"
        "default-del 2\n"
        "default-ins 2\n");
    CostFunction c = CostFunction::load(in);
    CHECK(c.scale() == 2);
    CHECK(c.sub("a", "b") == 1);
    CHECK(c.sub("b", "a") == 1);  // symmetric lookup of explicit entries
    CHECK(c.sub("q", "q") == 0);
    CHECK(c.sub("a", "q") == 2);
    CHECK(c.del("a") == 3);
    CHECK(c.del("zz") == 2);
    CHECK(c.ins("b") == 4);

    std::istringstream bad("scale 0\n");
    CHECK_THROWS_AS(CostFunction::load(bad), ParseError);
    std::istringstream bad2("sub a 1\n");
    CHECK_THROWS_AS(CostFunction::load(bad2), ParseError);
    std::istringstream nodefault("scale 1\nsub a b 1\n");
    CostFunction cn = CostFunction::load(nodefault);
    CHECK_THROWS_AS(cn.del("a"), std::invalid_argument);
}

TEST_CASE("format_scaled reduces exactly") {
    CHECK(format_scaled(4, 2) == "2");
    CHECK(format_scaled(3, 2) == "3/2");
    CHECK(format_scaled(0, 7) == "0");
    CHECK(format_scaled(6, 4) == "3/2");
    CHECK(format_scaled(7, 1) == "7");
}

TEST_SUITE_END();
