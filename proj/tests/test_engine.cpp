#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "treedist/engine.hpp"

using namespace treedist;

namespace {

const CostFunction kUnit = CostFunction::unit();

const std::vector<MappingClass> kClasses{MappingClass::Edit, MappingClass::Segmental,
                                         MappingClass::BottomUpSegmental, MappingClass::BottomUp};

CostValue dist(const Tree& t1, const Tree& t2, MappingClass cls, Method method,
               const CostFunction& cost = kUnit) {
    DistanceOptions o;
    o.cls = cls;
    o.method = method;
    return compute_distance(t1, t2, cost, o).distance;
}

// Metric with boundary pairs: sub(a,b) = del(a) + ins(b), so w_{a,b} = 0.
CostFunction boundary_cost() {
    std::istringstream in(
        "scale 2\n"
        "sub a b 2\n"
        "default-sub 1\n"
        "default-del 1\n"
        "default-ins 1\n");
    return CostFunction::load(in);
}

}  // namespace

TEST_SUITE_BEGIN("engine");

TEST_CASE("weights_edit examples") {
    Tree leaf1 = parse_bracket("a");
    WeightTable wl = weights_edit(leaf1, leaf1, kUnit);
    CHECK(wl.w(0, 0) == 2);

    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b,d)");
    WeightTable wt = weights_edit(t1, t2, kUnit);
    CHECK(wt.w(0, 0) == 5);
    CHECK(wt.is_valid(0, 0));
    CHECK(wt.subproblem_count == 1);  // only the root pair is internal-internal

    Tree k1 = parse_bracket("a(b(c),d)");
    WeightTable wk = weights_edit(k1, k1, kUnit);
    CHECK(wk.w(0, 0) == 2 * k1.size());
}

TEST_CASE("weights_segmental examples") {
    Tree t = parse_bracket("a(b)");
    WeightTable wt = weights_segmental(t, t, kUnit);
    CHECK(wt.w(1, 1) == 2);  // leaf base case
    CHECK(wt.w(0, 0) == 4);

    Tree chain = parse_bracket("a(b(c))");
    Tree two = parse_bracket("a(c)");
    WeightTable wc = weights_segmental(chain, two, kUnit);
    CHECK(wc.w(1, 1) == 1);  // (b, c): leaf on the right
    CHECK(wc.w(0, 0) == 3);  // 2 + W_{b,c}
    // Every entry is valid for the segmental class.
    for (NodeId x = 0; x < chain.size(); ++x)
        for (NodeId y = 0; y < two.size(); ++y) CHECK(wc.is_valid(x, y));
}

TEST_CASE("weights_botseg examples") {
    Tree t = parse_bracket("a(b)");
    WeightTable wt = weights_botseg(t, t, kUnit);
    CHECK(wt.w(0, 0) == 4);
    CHECK(wt.is_valid(0, 0));
    // (a, b): internal vs leaf is invalid with zero weight.
    CHECK_FALSE(wt.is_valid(0, 1));
    CHECK(wt.w(0, 1) == 0);
    CHECK_FALSE(wt.is_valid(1, 0));

    // Both internal but every child pair invalid: the matching value is 0,
    // so the pair is invalid too.
    Tree left = parse_bracket("a(b)");
    Tree right = parse_bracket("a(c(d))");
    WeightTable wb = weights_botseg(left, right, kUnit);
    CHECK_FALSE(wb.is_valid(0, 0));  // children: leaf b vs internal c
    CHECK(wb.w(0, 0) == 0);
}

TEST_CASE("weights_bottomup examples") {
    Tree chain = parse_bracket("a(b(c))");
    Tree star = parse_bracket("a(b,c)");
    WeightTable wt = weights_bottomup(chain, star, kUnit);
    CHECK_FALSE(wt.is_valid(0, 0));  // shapes differ
    CHECK(wt.w(0, 0) == 0);

    Tree one = parse_bracket("a");
    WeightTable w1 = weights_bottomup(one, one, kUnit);
    CHECK(w1.w(0, 0) == 2);

    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(d,e)");
    WeightTable w2 = weights_bottomup(t1, t2, kUnit);
    CHECK(w2.is_valid(0, 0));
    CHECK(w2.w(0, 0) == 4);  // 2 + two leaf pairs of weight 1 each
}

TEST_CASE("distance examples across methods") {
    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b,d)");
    for (Method method : {Method::Dp, Method::Naive, Method::Oracle})
        CHECK(dist(t1, t2, MappingClass::Edit, method) == 1);

    Tree chain = parse_bracket("a(b(c))");
    Tree two = parse_bracket("a(c)");
    CHECK(dist(chain, two, MappingClass::Segmental, Method::Dp) == 2);
    CHECK(dist(chain, two, MappingClass::Edit, Method::Dp) == 1);

    Rng rng(501);
    for (int trial = 0; trial < 10; ++trial) {
        Tree t = random_tree(rng, rng.range(1, 12), 0, 3);
        CHECK(dist(t, t, MappingClass::BottomUp, Method::Dp) == 0);
    }
}

TEST_CASE("cross-method exactness on random small instances") {
    Rng rng(503);
    for (int trial = 0; trial < 25; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 3);
        for (MappingClass cls : kClasses) {
            CostValue dp = dist(t1, t2, cls, Method::Dp);
            CostValue naive = dist(t1, t2, cls, Method::Naive);
            CostValue oracle = dist(t1, t2, cls, Method::Oracle);
            CHECK(dp == naive);
            CHECK(naive == oracle);
        }
    }
}

TEST_CASE("chain inequality on medium instances") {
    Rng rng(509);
    for (int trial = 0; trial < 10; ++trial) {
        Tree t1 = random_tree(rng, rng.range(2, 20), 0, 4);
        Tree t2 = random_tree(rng, rng.range(2, 20), 0, 4);
        CostValue prev = -1;
        for (MappingClass cls : kClasses) {
            CostValue d = dist(t1, t2, cls, Method::Dp);
            CHECK(d >= prev);
            prev = d;
        }
    }
}

TEST_CASE("unit-cost symmetry") {
    Rng rng(521);
    for (int trial = 0; trial < 10; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 10), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 10), 0, 3);
        for (MappingClass cls : kClasses)
            CHECK(dist(t1, t2, cls, Method::Dp) == dist(t2, t1, cls, Method::Dp));
    }
}

TEST_CASE("triangle inequality for the edit class") {
    Rng rng(523);
    for (int trial = 0; trial < 10; ++trial) {
        Tree a = random_tree(rng, rng.range(1, 8), 0, 3);
        Tree b = random_tree(rng, rng.range(1, 8), 0, 3);
        Tree c = random_tree(rng, rng.range(1, 8), 0, 3);
        CostValue ab = dist(a, b, MappingClass::Edit, Method::Dp);
        CostValue bc = dist(b, c, MappingClass::Edit, Method::Dp);
        CostValue ac = dist(a, c, MappingClass::Edit, Method::Dp);
        CHECK(ac <= ab + bc);
    }
}

TEST_CASE("reconstructed mappings are class-valid witnesses") {
    Rng rng(541);
    for (int trial = 0; trial < 20; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 9), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 9), 0, 3);
        for (MappingClass cls : kClasses) {
            for (Method method : {Method::Dp, Method::Naive}) {
                DistanceOptions o;
                o.cls = cls;
                o.method = method;
                DistanceResult r = compute_distance(t1, t2, kUnit, o);
                CHECK(is_valid_for_class(t1, t2, r.mapping, cls));
                CHECK(mapping_cost(kUnit, t1, t2, r.mapping) == r.distance);
            }
        }
    }
}

TEST_CASE("boundary-metric costs keep reconstruction sound") {
    CostFunction cost = boundary_cost();
    REQUIRE(validate_metric(cost, {"a", "b", "c"}).empty());
    Rng rng(547);
    for (int trial = 0; trial < 15; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 2);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 2);
        for (MappingClass cls : kClasses) {
            DistanceOptions o;
            o.cls = cls;
            DistanceResult r = compute_distance(t1, t2, cost, o);
            CHECK(r.scale == 2);
            CHECK(is_valid_for_class(t1, t2, r.mapping, cls));
            CHECK(mapping_cost(cost, t1, t2, r.mapping) == r.distance);
            CHECK(r.distance == dist(t1, t2, cls, Method::Oracle, cost));
        }
    }
}

TEST_CASE("subproblem formulations agree on optima") {
    Rng rng(557);
    for (int trial = 0; trial < 10; ++trial) {
        Tree t1 = random_tree(rng, rng.range(2, 6), 0, 3);
        Tree t2 = random_tree(rng, rng.range(2, 6), 0, 3);
        WeightTable wt = weights_edit(t1, t2, kUnit);
        for (NodeId x = 0; x < t1.size(); ++x)
            for (NodeId y = 0; y < t2.size(); ++y) {
                if (t1.is_leaf(x) || t2.is_leaf(y)) continue;
                IlpModel path = build_dp_subproblem(t1, x, t2, y, wt, kUnit);
                IlpModel anti = build_antichain_pairwise(t1, x, t2, y, wt, kUnit);
                CHECK(solve(path).best_value == solve(anti).best_value);
            }
    }
}

TEST_CASE("timeouts produce witnessed upper bounds") {
    Rng rng(563);
    for (int trial = 0; trial < 10; ++trial) {
        Tree t1 = random_tree(rng, rng.range(4, 7), 0, 3);
        Tree t2 = random_tree(rng, rng.range(4, 7), 0, 3);
        DistanceOptions o;
        o.cls = MappingClass::Edit;
        o.method = Method::Dp;
        o.solver.node_limit = 1;
        DistanceResult limited = compute_distance(t1, t2, kUnit, o);
        CostValue exact = dist(t1, t2, MappingClass::Edit, Method::Oracle);
        CHECK(limited.distance >= exact);
        // Even inexact results carry a mapping that reproduces the bound.
        CHECK(is_valid_for_class(t1, t2, limited.mapping, MappingClass::Edit));
        CHECK(mapping_cost(kUnit, t1, t2, limited.mapping) == limited.distance);
        if (limited.distance != exact) CHECK_FALSE(limited.exact);
    }
}

TEST_CASE("stats are populated") {
    Tree t1 = parse_bracket("a(b(c),d)");
    Tree t2 = parse_bracket("a(b,c(d))");
    DistanceOptions o;
    o.cls = MappingClass::Edit;
    DistanceResult r = compute_distance(t1, t2, kUnit, o);
    CHECK(r.stats.subproblem_count > 0);
    CHECK(r.stats.solver_nodes > 0);
    CHECK(r.stats.wall_ms >= 0.0);
}

TEST_SUITE_END();
