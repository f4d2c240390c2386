#pragma once

#include <optional>

#include "treedist/cost.hpp"
#include "treedist/ilp.hpp"
#include "treedist/mapping.hpp"
#include "treedist/solver.hpp"
#include "treedist/tree.hpp"

namespace treedist {

enum class Method { Dp, Naive, Oracle };

const char* to_string(Method method);

struct DistanceOptions {
    MappingClass cls = MappingClass::Edit;
    Method method = Method::Dp;
    /// Budget shared by every solve in the call: subproblem solves and the
    /// final combiner draw down the same time limit.
    SolverConfig solver;
    int oracle_node_cap = 14;
};

struct DistanceStats {
    long long solver_nodes = 0;
    int subproblem_count = 0;
    double wall_ms = 0.0;
};

struct DistanceResult {
    CostValue distance = 0;  // scaled integer; divide by scale for the value
    CostValue scale = 1;
    Mapping mapping;  // class-valid; its cost reproduces `distance`
    bool exact = true;  // false: a limit was hit and `distance` is an upper bound
    DistanceStats stats;
};

/// Per-pair subproblem values for the given class, computed bottom-up in
/// post-order pair order (all strict descendant pairs precede their pair).
/// The edit class solves one small IP per internal pair; the variants use
/// bipartite matching. `solver` is consulted for the edit class only.
WeightTable compute_weights(const Tree& t1, const Tree& t2, const CostFunction& cost,
                            MappingClass cls, const SolverConfig& solver = {});

WeightTable weights_edit(const Tree& t1, const Tree& t2, const CostFunction& cost,
                         const SolverConfig& solver = {});
WeightTable weights_segmental(const Tree& t1, const Tree& t2, const CostFunction& cost);
WeightTable weights_botseg(const Tree& t1, const Tree& t2, const CostFunction& cost);
WeightTable weights_bottomup(const Tree& t1, const Tree& t2, const CostFunction& cost);

/// Computes the class distance with the chosen method and reconstructs one
/// optimal mapping. On a timeout the result is flagged inexact and the
/// distance is the best-known upper bound.
DistanceResult compute_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                                const DistanceOptions& opts = {});

}  // namespace treedist
