#include "doctest.h"
#include "support.hpp"
#include "treedist/mapping.hpp"

using namespace treedist;

TEST_SUITE_BEGIN("mapping");

TEST_CASE("is_tai") {
    Tree t = parse_bracket("a(b)");
    CHECK(is_tai(t, t, {{0, 0}, {1, 1}}));
    CHECK_FALSE(is_tai(t, t, {{0, 1}, {1, 0}}));  // order reversal
    CHECK_FALSE(is_tai(t, t, {{1, 0}, {1, 1}}));  // one-to-one violated
    CHECK(is_tai(t, t, {}));
}

TEST_CASE("is_segmental") {
    Tree chain = parse_bracket("a(b(c))");
    Tree two = parse_bracket("a(c)");
    // p(c) = b is unmapped on the left while a < c on both sides.
    CHECK_FALSE(is_segmental(chain, two, {{0, 0}, {2, 1}}));
    CHECK(is_tai(chain, two, {{0, 0}, {2, 1}}));
    CHECK(is_segmental(chain, chain, {{0, 0}, {1, 1}, {2, 2}}));
    // A single pair is segmental iff it is Tai (vacuous condition).
    CHECK(is_segmental(chain, two, {{2, 1}}));
}

TEST_CASE("is_bottomup_segmental") {
    Tree t = parse_bracket("a(b)");
    CHECK_FALSE(is_bottomup_segmental(t, t, {{0, 0}}));  // no leaf pair below (a,a)
    CHECK(is_bottomup_segmental(t, t, {{0, 0}, {1, 1}}));
    CHECK(is_bottomup_segmental(t, t, {{1, 1}}));  // leaves support themselves
}

TEST_CASE("is_bottomup") {
    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b)");
    CHECK_FALSE(is_bottomup(t1, t2, {{0, 0}, {1, 1}}));  // |C| differs at the root pair
    Tree t3 = parse_bracket("a(b,d)");
    CHECK(is_bottomup(t1, t3, {{0, 0}, {1, 1}, {2, 2}}));
    CHECK(is_bottomup(t1, t2, {}));  // vacuous
}

TEST_CASE("class nesting on random mappings") {
    Rng rng(101);
    int bot_seen = 0, seg_seen = 0;
    for (int trial = 0; trial < 4000; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 2);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 2);
        Mapping m = testsupport::random_mapping(rng, t1, t2, 5);
        if (is_bottomup(t1, t2, m)) {
            CHECK(is_bottomup_segmental(t1, t2, m));
            ++bot_seen;
        }
        if (is_bottomup_segmental(t1, t2, m)) CHECK(is_segmental(t1, t2, m));
        if (is_segmental(t1, t2, m)) {
            CHECK(is_tai(t1, t2, m));
            ++seg_seen;
        }
    }
    // The sampler must actually exercise the stronger classes.
    CHECK(bot_seen > 10);
    CHECK(seg_seen > 10);
}

TEST_CASE("bottom-up equals the subtree-isomorphism restatement") {
    // Restatement: for every mapped pair, the restriction of the mapping to
    // the two subtrees is a label-ignoring isomorphism between them.
    Rng rng(103);
    auto restatement = [](const Tree& t1, const Tree& t2, const Mapping& m) {
        if (!is_tai(t1, t2, m)) return false;
        for (auto [x, y] : m) {
            std::vector<std::pair<NodeId, NodeId>> sub;
            for (auto [a, b] : m)
                if (t1.is_ancestor_or_self(x, a) || t2.is_ancestor_or_self(y, b))
                    sub.emplace_back(a, b);
            if (static_cast<int>(sub.size()) != t1.subtree_size(x)) return false;
            if (static_cast<int>(sub.size()) != t2.subtree_size(y)) return false;
            for (auto [a, b] : sub) {
                if (!t1.is_ancestor_or_self(x, a) || !t2.is_ancestor_or_self(y, b)) return false;
                if (a == x) {
                    if (b != y) return false;
                } else {
                    bool parent_mapped = false;
                    for (auto [p, q] : sub)
                        if (p == t1.parent(a) && q == t2.parent(b)) parent_mapped = true;
                    if (!parent_mapped) return false;
                }
            }
        }
        return true;
    };
    int agree_true = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 2);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 2);
        Mapping m = testsupport::random_mapping(rng, t1, t2, 5);
        bool direct = is_bottomup(t1, t2, m);
        CHECK(direct == restatement(t1, t2, m));
        if (direct && !m.empty()) ++agree_true;
    }
    CHECK(agree_true > 10);
}

TEST_CASE("brute force examples") {
    CostFunction unit = CostFunction::unit();
    Tree t1 = parse_bracket("a(b,c)");
    Tree t2 = parse_bracket("a(b,d)");
    for (MappingClass cls : {MappingClass::Edit, MappingClass::Segmental,
                             MappingClass::BottomUpSegmental, MappingClass::BottomUp}) {
        BruteForceResult same = brute_force_distance(t1, t1, unit, cls);
        CHECK(same.distance == 0);
    }
    CHECK(brute_force_distance(t1, t2, unit, MappingClass::Edit).distance == 1);

    Tree chain = parse_bracket("a(b(c))");
    Tree two = parse_bracket("a(c)");
    CHECK(brute_force_distance(chain, two, unit, MappingClass::Edit).distance == 1);
    CHECK(brute_force_distance(chain, two, unit, MappingClass::Segmental).distance == 2);
}

TEST_CASE("brute force returns a witness of its distance") {
    CostFunction unit = CostFunction::unit();
    Rng rng(107);
    for (int trial = 0; trial < 30; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 3);
        for (MappingClass cls : {MappingClass::Edit, MappingClass::Segmental,
                                 MappingClass::BottomUpSegmental, MappingClass::BottomUp}) {
            BruteForceResult r = brute_force_distance(t1, t2, unit, cls);
            CHECK(is_valid_for_class(t1, t2, r.mapping, cls));
            CHECK(mapping_cost(unit, t1, t2, r.mapping) == r.distance);
        }
    }
}

TEST_CASE("brute force distances are monotone over classes") {
    CostFunction unit = CostFunction::unit();
    Rng rng(109);
    for (int trial = 0; trial < 30; ++trial) {
        Tree t1 = random_tree(rng, rng.range(1, 6), 0, 3);
        Tree t2 = random_tree(rng, rng.range(1, 6), 0, 3);
        CostValue edit = brute_force_distance(t1, t2, unit, MappingClass::Edit).distance;
        CostValue seg = brute_force_distance(t1, t2, unit, MappingClass::Segmental).distance;
        CostValue botseg =
            brute_force_distance(t1, t2, unit, MappingClass::BottomUpSegmental).distance;
        CostValue bot = brute_force_distance(t1, t2, unit, MappingClass::BottomUp).distance;
        CHECK(edit <= seg);
        CHECK(seg <= botseg);
        CHECK(botseg <= bot);
    }
}

TEST_CASE("brute force node cap") {
    CostFunction unit = CostFunction::unit();
    Tree big = parse_bracket("a(b,c,d,e,f,g,h)");
    CHECK_THROWS_AS(brute_force_distance(big, big, unit, MappingClass::Edit),
                    std::invalid_argument);
    CHECK(brute_force_distance(big, big, unit, MappingClass::Edit, 16).distance == 0);
}

TEST_SUITE_END();
