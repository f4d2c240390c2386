#pragma once

// Shared test helpers. The checkers here are deliberately independent of
// the library code paths they validate: isomorphism by backtracking,
// matchings by enumeration, integer programs by enumerating assignments.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "treedist/engine.hpp"
#include "treedist/harness.hpp"
#include "treedist/matching.hpp"

namespace testsupport {

using namespace treedist;

// Unordered unlabeled isomorphism by recursive backtracking over child
// permutations.
inline bool backtrack_isomorphic(const Tree& t1, NodeId x, const Tree& t2, NodeId y) {
    const auto& cx = t1.children(x);
    const auto& cy = t2.children(y);
    if (cx.size() != cy.size()) return false;
    std::vector<bool> used(cy.size(), false);
    std::function<bool(std::size_t)> match = [&](std::size_t i) {
        if (i == cx.size()) return true;
        for (std::size_t j = 0; j < cy.size(); ++j) {
            if (used[j] || !backtrack_isomorphic(t1, cx[i], t2, cy[j])) continue;
            used[j] = true;
            if (match(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return match(0);
}

// Labeled variant, used for the parse/render round-trip law.
inline bool backtrack_isomorphic_labeled(const Tree& t1, NodeId x, const Tree& t2, NodeId y) {
    if (t1.label(x) != t2.label(y)) return false;
    const auto& cx = t1.children(x);
    const auto& cy = t2.children(y);
    if (cx.size() != cy.size()) return false;
    std::vector<bool> used(cy.size(), false);
    std::function<bool(std::size_t)> match = [&](std::size_t i) {
        if (i == cx.size()) return true;
        for (std::size_t j = 0; j < cy.size(); ++j) {
            if (used[j] || !backtrack_isomorphic_labeled(t1, cx[i], t2, cy[j])) continue;
            used[j] = true;
            if (match(i + 1)) return true;
            used[j] = false;
        }
        return false;
    };
    return match(0);
}

struct EnumMatching {
    bool feasible = false;
    std::int64_t value = 0;
    std::vector<std::pair<int, int>> pairs;  // canonical: lex-smallest among optima
};

// All matchings (or all perfect matchings) by row-wise enumeration.
inline EnumMatching enumerate_matching(const WeightMatrix& w, bool perfect) {
    EnumMatching best;
    std::vector<bool> used(w.cols(), false);
    std::vector<std::pair<int, int>> current;
    std::function<void(int, std::int64_t)> rec = [&](int row, std::int64_t value) {
        if (row == w.rows()) {
            if (perfect && static_cast<int>(current.size()) != w.rows()) return;
            std::vector<std::pair<int, int>> sorted = current;
            std::sort(sorted.begin(), sorted.end());
            if (!best.feasible || value > best.value ||
                (value == best.value && sorted < best.pairs)) {
                best.feasible = true;
                best.value = value;
                best.pairs = std::move(sorted);
            }
            return;
        }
        if (!perfect) rec(row + 1, value);
        for (int j = 0; j < w.cols(); ++j) {
            if (used[j] || w.forbidden(row, j)) continue;
            used[j] = true;
            current.emplace_back(row, j);
            rec(row + 1, value + w.at(row, j));
            current.pop_back();
            used[j] = false;
        }
    };
    rec(0, 0);
    return best;
}

// Exhaustive 0/1 enumeration of a model; returns the exact optimum of the
// variable objective, or nullopt when no assignment is feasible.
inline std::optional<CostValue> enumerate_model_optimum(const IlpModel& model) {
    const std::size_t nv = model.vars.size();
    if (nv > 24) throw std::logic_error("enumerate_model_optimum: too many variables");
    std::optional<CostValue> best;
    for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
        bool ok = true;
        for (const auto& c : model.constraints) {
            CostValue lhs = 0;
            for (auto [v, coeff] : c.terms)
                if (mask >> v & 1) lhs += coeff;
            if (c.sense == ConstraintSense::LessEq ? lhs > c.rhs : lhs != c.rhs) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        CostValue value = 0;
        for (std::size_t v = 0; v < nv; ++v)
            if (mask >> v & 1) value += model.vars[v].coeff;
        if (!best || value > *best) best = value;
    }
    return best;
}

// All feasible assignments of a model as variable index sets.
inline std::vector<std::vector<int>> enumerate_feasible_sets(const IlpModel& model) {
    const std::size_t nv = model.vars.size();
    if (nv > 22) throw std::logic_error("enumerate_feasible_sets: too many variables");
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1u << nv); ++mask) {
        bool ok = true;
        for (const auto& c : model.constraints) {
            CostValue lhs = 0;
            for (auto [v, coeff] : c.terms)
                if (mask >> v & 1) lhs += coeff;
            if (c.sense == ConstraintSense::LessEq ? lhs > c.rhs : lhs != c.rhs) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        std::vector<int> set;
        for (std::size_t v = 0; v < nv; ++v)
            if (mask >> v & 1) set.push_back(static_cast<int>(v));
        out.push_back(std::move(set));
    }
    return out;
}

// Random mapping between two trees: each pair kept with probability ~1/k.
inline Mapping random_mapping(Rng& rng, const Tree& t1, const Tree& t2, int keep_one_in = 4) {
    Mapping m;
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y)
            if (rng.below(keep_one_in) == 0) m.emplace_back(x, y);
    normalize_mapping(m);
    return m;
}

// Random one-to-one mapping (not necessarily Tai).
inline Mapping random_injection(Rng& rng, const Tree& t1, const Tree& t2) {
    Mapping m;
    std::vector<bool> used(t2.size(), false);
    for (NodeId x = 0; x < t1.size(); ++x) {
        if (rng.below(2) == 0) continue;
        NodeId y = static_cast<NodeId>(rng.below(t2.size()));
        if (used[y]) continue;
        used[y] = true;
        m.emplace_back(x, y);
    }
    normalize_mapping(m);
    return m;
}

}  // namespace testsupport
