#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "treedist/cost.hpp"
#include "treedist/tree.hpp"

namespace treedist {

/// Per-pair subproblem values W[x][y] with a validity flag. Witnesses hold
/// the pairs chosen by the subproblem (or children matching) and drive
/// mapping reconstruction.
struct WeightTable {
    int n = 0, m = 0;
    std::vector<CostValue> weight;
    std::vector<std::uint8_t> valid;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> witness;
    bool exact = true;            // false when a subproblem solve hit a limit
    long long solver_nodes = 0;   // accumulated branch-and-bound nodes
    int subproblem_count = 0;

    WeightTable() = default;
    WeightTable(int n_, int m_)
        : n(n_),
          m(m_),
          weight(static_cast<std::size_t>(n_) * m_, 0),
          valid(static_cast<std::size_t>(n_) * m_, 0),
          witness(static_cast<std::size_t>(n_) * m_) {}

    std::size_t idx(NodeId x, NodeId y) const { return static_cast<std::size_t>(x) * m + y; }
    CostValue w(NodeId x, NodeId y) const { return weight[idx(x, y)]; }
    bool is_valid(NodeId x, NodeId y) const { return valid[idx(x, y)] != 0; }
};

enum class ConstraintSense { LessEq, Eq };

struct IlpConstraint {
    std::vector<std::pair<int, CostValue>> terms;  // (variable index, coefficient)
    ConstraintSense sense = ConstraintSense::LessEq;
    CostValue rhs = 0;
};

/// Optional solver hint. Groups form a forest, and the model's constraints
/// guarantee that two variables assigned to comparable groups (one an
/// ancestor of the other, or the same group) can never both be 1. The
/// path-constraint builders attach one forest per tree side (so the hints
/// also promise one-to-one selection in both coordinates); the solver uses
/// max-independent-set DPs over the forests, optionally priced by matching
/// duals, as upper bounds.
struct BoundForest {
    std::vector<int> group_parent;  // per group; -1 for forest roots
    std::vector<int> var_group;     // per variable; -1 means unconstrained
    bool groups_by_x = true;        // which pair coordinate the groups follow
};

/// 0-1 integer program in maximize form. Every variable is tagged with the
/// node pair it encodes and carries its objective coefficient; the constant
/// term is kept outside the variable objective so solver values compose
/// additively.
struct IlpModel {
    struct Var {
        NodeId x, y;
        CostValue coeff;
    };
    std::vector<Var> vars;
    std::vector<IlpConstraint> constraints;
    CostValue constant_term = 0;
    std::vector<BoundForest> bound_forests;

    int var_index(NodeId x, NodeId y) const;  // -1 when absent
};

/// Naive formulation of the Tai mapping problem: row/column packing plus a
/// pairwise conflict row for every two variables (distinct on both sides)
/// that disagree on the ancestor relation.
IlpModel build_naive_tai(const Tree& t1, const Tree& t2, const CostFunction& cost);

/// Naive Tai plus linking rows m + m' <= m_parent + 1 for nested pairs.
IlpModel build_naive_segmental(const Tree& t1, const Tree& t2, const CostFunction& cost);

/// Naive segmental plus leaf-support rows m_{x,y} <= sum of leaf-leaf
/// variables under (x, y) for every pair that is not leaf-leaf.
IlpModel build_naive_botseg(const Tree& t1, const Tree& t2, const CostFunction& cost);

/// Naive Tai plus children-bijection rows.
IlpModel build_naive_bottomup(const Tree& t1, const Tree& t2, const CostFunction& cost);

/// Subproblem for W_{x,y}: variables over strict descendant pairs weighted
/// by wt, one packing row per leaf path on each side, constant term
/// w_{x,y}. Emits exactly |L(T1(x))| + |L(T2(y))| constraints.
IlpModel build_dp_subproblem(const Tree& t1, NodeId x, const Tree& t2, NodeId y,
                             const WeightTable& wt, const CostFunction& cost);

/// Top-level combiner: variables over valid entries of wt weighted by W,
/// one packing row per full root-to-leaf path on each side.
IlpModel build_combiner(const Tree& t1, const Tree& t2, const WeightTable& wt);

/// Same subproblem as build_dp_subproblem but with pairwise conflict rows
/// (one-to-one violations and comparable pairs on either side); an
/// independent formulation used for cross-validation.
IlpModel build_antichain_pairwise(const Tree& t1, NodeId x, const Tree& t2, NodeId y,
                                  const WeightTable& wt, const CostFunction& cost);

/// Serializes the model in LP format (Maximize / Subject To / Binary) with
/// variables named m_<x>_<y>. The constant term is emitted as a comment.
std::string export_lp(const IlpModel& model);

}  // namespace treedist
