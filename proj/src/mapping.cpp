#include "treedist/mapping.hpp"

#include <algorithm>
#include <stdexcept>

namespace treedist {

const char* to_string(MappingClass cls) {
    switch (cls) {
        case MappingClass::Edit: return "edit";
        case MappingClass::Segmental: return "seg";
        case MappingClass::BottomUpSegmental: return "botseg";
        case MappingClass::BottomUp: return "bot";
    }
    return "?";
}

void normalize_mapping(Mapping& m) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
}

bool is_tai(const Tree& t1, const Tree& t2, const Mapping& m) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto [x, y] = m[i];
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            auto [x2, y2] = m[j];
            if ((x == x2) != (y == y2)) return false;
            if (t1.is_ancestor(x, x2) != t2.is_ancestor(y, y2)) return false;
            if (t1.is_ancestor(x2, x) != t2.is_ancestor(y2, y)) return false;
        }
    }
    return true;
}

bool is_segmental(const Tree& t1, const Tree& t2, const Mapping& m) {
    if (!is_tai(t1, t2, m)) return false;
    Mapping sorted = m;
    std::sort(sorted.begin(), sorted.end());
    auto contains = [&](NodeId x, NodeId y) {
        return std::binary_search(sorted.begin(), sorted.end(), std::make_pair(x, y));
    };
    for (auto [x, y] : sorted)
        for (auto [x2, y2] : sorted)
            if (t1.is_ancestor(x, x2) && t2.is_ancestor(y, y2))
                if (!contains(t1.parent(x2), t2.parent(y2))) return false;
    return true;
}

bool is_bottomup_segmental(const Tree& t1, const Tree& t2, const Mapping& m) {
    if (!is_segmental(t1, t2, m)) return false;
    for (auto [x, y] : m) {
        bool supported = false;
        for (auto [x2, y2] : m) {
            if (t1.is_leaf(x2) && t2.is_leaf(y2) && t1.is_ancestor_or_self(x, x2) &&
                t2.is_ancestor_or_self(y, y2)) {
                supported = true;
                break;
            }
        }
        if (!supported) return false;
    }
    return true;
}

bool is_bottomup(const Tree& t1, const Tree& t2, const Mapping& m) {
    if (!is_tai(t1, t2, m)) return false;
    for (auto [x, y] : m) {
        const auto& cx = t1.children(x);
        const auto& cy = t2.children(y);
        if (cx.size() != cy.size()) return false;
        // Count pairs inside C(x) x C(y). Tai injectivity makes |C(x)| such
        // pairs a bijection; a child mapped outside the other sibling set
        // can never be covered by the restriction.
        std::size_t inside = 0;
        for (auto [a, b] : m) {
            bool a_child = std::find(cx.begin(), cx.end(), a) != cx.end();
            bool b_child = std::find(cy.begin(), cy.end(), b) != cy.end();
            if (a_child && b_child)
                ++inside;
            else if (a_child != b_child)
                return false;
        }
        if (inside != cx.size()) return false;
    }
    return true;
}

bool is_valid_for_class(const Tree& t1, const Tree& t2, const Mapping& m, MappingClass cls) {
    switch (cls) {
        case MappingClass::Edit: return is_tai(t1, t2, m);
        case MappingClass::Segmental: return is_segmental(t1, t2, m);
        case MappingClass::BottomUpSegmental: return is_bottomup_segmental(t1, t2, m);
        case MappingClass::BottomUp: return is_bottomup(t1, t2, m);
    }
    return false;
}

namespace {

struct OracleSearch {
    const Tree& t1;
    const Tree& t2;
    const CostFunction& cost;
    MappingClass cls;

    Mapping current;
    std::vector<bool> used2;
    bool have_best = false;
    CostValue best_cost = 0;
    Mapping best_mapping;

    bool tai_compatible(NodeId x, NodeId y) const {
        for (auto [a, b] : current) {
            if (t1.is_ancestor(a, x) != t2.is_ancestor(b, y)) return false;
            if (t1.is_ancestor(x, a) != t2.is_ancestor(y, b)) return false;
        }
        return true;
    }

    void consider_complete() {
        if (!is_valid_for_class(t1, t2, current, cls)) return;
        CostValue c = mapping_cost(cost, t1, t2, current);
        Mapping sorted = current;
        std::sort(sorted.begin(), sorted.end());
        if (!have_best || c < best_cost || (c == best_cost && sorted < best_mapping)) {
            have_best = true;
            best_cost = c;
            best_mapping = std::move(sorted);
        }
    }

    void search(NodeId x) {
        if (x == t1.size()) {
            consider_complete();
            return;
        }
        // x unmapped
        search(x + 1);
        // x mapped to any free, Tai-compatible y
        for (NodeId y = 0; y < t2.size(); ++y) {
            if (used2[y] || !tai_compatible(x, y)) continue;
            used2[y] = true;
            current.emplace_back(x, y);
            search(x + 1);
            current.pop_back();
            used2[y] = false;
        }
    }
};

}  // namespace

BruteForceResult brute_force_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                                      MappingClass cls, int node_cap) {
    if (t1.size() + t2.size() > node_cap)
        throw std::invalid_argument("brute_force_distance: instance exceeds node cap of " +
                                    std::to_string(node_cap));
    OracleSearch s{t1, t2, cost, cls, {}, std::vector<bool>(t2.size(), false), false, 0, {}};
    s.search(0);
    // The empty mapping is valid for every class, so a best always exists.
    return {s.best_cost, std::move(s.best_mapping)};
}

}  // namespace treedist
