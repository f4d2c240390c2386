#include "treedist/ilp.hpp"

#include <algorithm>
#include <sstream>

namespace treedist {

int IlpModel::var_index(NodeId x, NodeId y) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i].x == x && vars[i].y == y) return static_cast<int>(i);
    return -1;
}

namespace {

// Dense variable grid over T1 x T2 in (pre-order x, pre-order y) order.
struct VarGrid {
    int m;
    int index(NodeId x, NodeId y) const { return x * m + y; }
};

IlpModel dense_tai_base(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    IlpModel model;
    const int n = t1.size(), m = t2.size();
    model.vars.reserve(static_cast<std::size_t>(n) * m);
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = 0; y < m; ++y)
            model.vars.push_back({x, y, cost.pair_weight(t1.label(x), t2.label(y))});
    model.constant_term = total_delete_insert(cost, t1, t2);

    VarGrid grid{m};
    for (NodeId x = 0; x < n; ++x) {
        IlpConstraint row;
        for (NodeId y = 0; y < m; ++y) row.terms.emplace_back(grid.index(x, y), 1);
        row.rhs = 1;
        model.constraints.push_back(std::move(row));
    }
    for (NodeId y = 0; y < m; ++y) {
        IlpConstraint col;
        for (NodeId x = 0; x < n; ++x) col.terms.emplace_back(grid.index(x, y), 1);
        col.rhs = 1;
        model.constraints.push_back(std::move(col));
    }
    // Ancestor-preservation conflicts. Pairs sharing a node are already
    // covered by the row/column constraints, so only node-disjoint pairs
    // need a conflict row.
    for (NodeId x = 0; x < n; ++x)
        for (NodeId y = 0; y < m; ++y)
            for (NodeId x2 = x; x2 < n; ++x2)
                for (NodeId y2 = (x2 == x ? y + 1 : 0); y2 < m; ++y2) {
                    if (x2 == x || y2 == y) continue;
                    bool bad = t1.is_ancestor(x, x2) != t2.is_ancestor(y, y2) ||
                               t1.is_ancestor(x2, x) != t2.is_ancestor(y2, y);
                    if (!bad) continue;
                    IlpConstraint c;
                    c.terms.emplace_back(grid.index(x, y), 1);
                    c.terms.emplace_back(grid.index(x2, y2), 1);
                    c.rhs = 1;
                    model.constraints.push_back(std::move(c));
                }
    return model;
}

void add_segmental_rows(IlpModel& model, const Tree& t1, const Tree& t2) {
    VarGrid grid{t2.size()};
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y)
            for (NodeId x2 = 0; x2 < t1.size(); ++x2)
                for (NodeId y2 = 0; y2 < t2.size(); ++y2) {
                    if (!t1.is_ancestor(x, x2) || !t2.is_ancestor(y, y2)) continue;
                    NodeId px = t1.parent(x2), py = t2.parent(y2);
                    if (px == x && py == y) continue;  // reduces to m' <= 1
                    IlpConstraint c;
                    c.terms.emplace_back(grid.index(x, y), 1);
                    c.terms.emplace_back(grid.index(x2, y2), 1);
                    c.terms.emplace_back(grid.index(px, py), -1);
                    c.rhs = 1;
                    model.constraints.push_back(std::move(c));
                }
}

}  // namespace

IlpModel build_naive_tai(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    return dense_tai_base(t1, t2, cost);
}

IlpModel build_naive_segmental(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    IlpModel model = dense_tai_base(t1, t2, cost);
    add_segmental_rows(model, t1, t2);
    return model;
}

IlpModel build_naive_botseg(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    IlpModel model = build_naive_segmental(t1, t2, cost);
    VarGrid grid{t2.size()};
    // Leaf support: every selected pair needs a selected leaf-leaf pair at
    // or below it. For a leaf-leaf pair the row is vacuous; for a pair with
    // exactly one leaf it combines with the one-to-one rows to forbid the
    // pair, which the mapping class requires.
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y) {
            if (t1.is_leaf(x) && t2.is_leaf(y)) continue;
            IlpConstraint c;
            c.terms.emplace_back(grid.index(x, y), 1);
            for (NodeId lx : t1.leaves_under(x))
                for (NodeId ly : t2.leaves_under(y)) {
                    if (lx == x && ly == y) continue;
                    c.terms.emplace_back(grid.index(lx, ly), -1);
                }
            c.rhs = 0;
            model.constraints.push_back(std::move(c));
        }
    return model;
}

IlpModel build_naive_bottomup(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    IlpModel model = dense_tai_base(t1, t2, cost);
    VarGrid grid{t2.size()};
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y) {
            for (NodeId cx : t1.children(x)) {
                IlpConstraint c;
                c.terms.emplace_back(grid.index(x, y), 1);
                for (NodeId cy : t2.children(y)) c.terms.emplace_back(grid.index(cx, cy), -1);
                c.rhs = 0;
                model.constraints.push_back(std::move(c));
            }
            for (NodeId cy : t2.children(y)) {
                IlpConstraint c;
                c.terms.emplace_back(grid.index(x, y), 1);
                for (NodeId cx : t1.children(x)) c.terms.emplace_back(grid.index(cx, cy), -1);
                c.rhs = 0;
                model.constraints.push_back(std::move(c));
            }
        }
    return model;
}

namespace {

// Variables over the strict descendant pairs of (x, y), in id order.
struct SubgridVars {
    NodeId x, y;
    int size1, size2;  // strict descendant counts
    int index(NodeId x2, NodeId y2) const { return (x2 - x - 1) * size2 + (y2 - y - 1); }
};

// Bound forest over the strict descendants of `top` (children of `top`
// become roots); variables are grouped by the chosen pair coordinate.
BoundForest subtree_forest(const Tree& t, NodeId top, const IlpModel& model, bool left_side) {
    BoundForest f;
    f.groups_by_x = left_side;
    const int count = t.subtree_size(top) - 1;
    f.group_parent.resize(count);
    for (NodeId v = top + 1; v < top + 1 + count; ++v)
        f.group_parent[v - top - 1] = t.parent(v) == top ? -1 : t.parent(v) - top - 1;
    f.var_group.reserve(model.vars.size());
    for (const auto& var : model.vars)
        f.var_group.push_back((left_side ? var.x : var.y) - top - 1);
    return f;
}

void attach_subproblem_forests(IlpModel& model, const Tree& t1, NodeId x, const Tree& t2,
                               NodeId y) {
    model.bound_forests.push_back(subtree_forest(t1, x, model, true));
    model.bound_forests.push_back(subtree_forest(t2, y, model, false));
}

IlpModel subproblem_vars(const Tree& t1, NodeId x, const Tree& t2, NodeId y,
                         const WeightTable& wt, const CostFunction& cost) {
    IlpModel model;
    const NodeId end1 = x + t1.subtree_size(x), end2 = y + t2.subtree_size(y);
    for (NodeId x2 = x + 1; x2 < end1; ++x2)
        for (NodeId y2 = y + 1; y2 < end2; ++y2)
            model.vars.push_back({x2, y2, wt.w(x2, y2)});
    model.constant_term = cost.pair_weight(t1.label(x), t2.label(y));
    return model;
}

}  // namespace

IlpModel build_dp_subproblem(const Tree& t1, NodeId x, const Tree& t2, NodeId y,
                             const WeightTable& wt, const CostFunction& cost) {
    IlpModel model = subproblem_vars(t1, x, t2, y, wt, cost);
    SubgridVars grid{x, y, t1.subtree_size(x) - 1, t2.subtree_size(y) - 1};
    // One packing row per leaf path on each side; an empty row is emitted
    // when the subtree root is itself the leaf so the constraint count is
    // exactly |L(T1(x))| + |L(T2(y))|.
    for (NodeId l : t1.leaves_under(x)) {
        IlpConstraint c;
        if (l != x)
            for (NodeId px : t1.path_to_leaf(x, l))
                if (px != x)
                    for (NodeId y2 = y + 1; y2 < y + 1 + grid.size2; ++y2)
                        c.terms.emplace_back(grid.index(px, y2), 1);
        c.rhs = 1;
        model.constraints.push_back(std::move(c));
    }
    for (NodeId l : t2.leaves_under(y)) {
        IlpConstraint c;
        if (l != y)
            for (NodeId py : t2.path_to_leaf(y, l))
                if (py != y)
                    for (NodeId x2 = x + 1; x2 < x + 1 + grid.size1; ++x2)
                        c.terms.emplace_back(grid.index(x2, py), 1);
        c.rhs = 1;
        model.constraints.push_back(std::move(c));
    }
    attach_subproblem_forests(model, t1, x, t2, y);
    return model;
}

IlpModel build_combiner(const Tree& t1, const Tree& t2, const WeightTable& wt) {
    IlpModel model;
    std::vector<int> var_of(static_cast<std::size_t>(t1.size()) * t2.size(), -1);
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y)
            if (wt.is_valid(x, y)) {
                var_of[wt.idx(x, y)] = static_cast<int>(model.vars.size());
                model.vars.push_back({x, y, wt.w(x, y)});
            }
    for (NodeId l : t1.leaves()) {
        IlpConstraint c;
        for (std::size_t v = 0; v < model.vars.size(); ++v)
            if (t1.is_ancestor_or_self(model.vars[v].x, l))
                c.terms.emplace_back(static_cast<int>(v), 1);
        c.rhs = 1;
        model.constraints.push_back(std::move(c));
    }
    for (NodeId l : t2.leaves()) {
        IlpConstraint c;
        for (std::size_t v = 0; v < model.vars.size(); ++v)
            if (t2.is_ancestor_or_self(model.vars[v].y, l))
                c.terms.emplace_back(static_cast<int>(v), 1);
        c.rhs = 1;
        model.constraints.push_back(std::move(c));
    }
    for (int side = 0; side < 2; ++side) {
        const Tree& t = side == 0 ? t1 : t2;
        BoundForest f;
        f.groups_by_x = side == 0;
        f.group_parent.resize(t.size());
        for (NodeId v = 0; v < t.size(); ++v) f.group_parent[v] = t.parent(v);
        for (const auto& var : model.vars) f.var_group.push_back(side == 0 ? var.x : var.y);
        model.bound_forests.push_back(std::move(f));
    }
    return model;
}

IlpModel build_antichain_pairwise(const Tree& t1, NodeId x, const Tree& t2, NodeId y,
                                  const WeightTable& wt, const CostFunction& cost) {
    IlpModel model = subproblem_vars(t1, x, t2, y, wt, cost);
    for (std::size_t a = 0; a < model.vars.size(); ++a)
        for (std::size_t b = a + 1; b < model.vars.size(); ++b) {
            const auto& va = model.vars[a];
            const auto& vb = model.vars[b];
            bool conflict = va.x == vb.x || va.y == vb.y || t1.comparable(va.x, vb.x) ||
                            t2.comparable(va.y, vb.y);
            if (!conflict) continue;
            IlpConstraint c;
            c.terms.emplace_back(static_cast<int>(a), 1);
            c.terms.emplace_back(static_cast<int>(b), 1);
            c.rhs = 1;
            model.constraints.push_back(std::move(c));
        }
    attach_subproblem_forests(model, t1, x, t2, y);
    return model;
}

std::string export_lp(const IlpModel& model) {
    std::ostringstream out;
    auto name = [&](int v) {
        return "m_" + std::to_string(model.vars[v].x) + "_" + std::to_string(model.vars[v].y);
    };
    out << "\\ constant term: " << model.constant_term << "\n";
    out << "Maximize\n obj:";
    if (model.vars.empty()) out << " 0";
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
        CostValue coeff = model.vars[v].coeff;
        if (v == 0)
            out << " " << coeff << " " << name(static_cast<int>(v));
        else
            out << " + " << coeff << " " << name(static_cast<int>(v));
    }
    out << "\nSubject To\n";
    for (std::size_t r = 0; r < model.constraints.size(); ++r) {
        const auto& c = model.constraints[r];
        out << " c" << r << ":";
        if (c.terms.empty()) out << " 0";
        bool first = true;
        for (auto [v, coeff] : c.terms) {
            if (first) {
                if (coeff == 1)
                    out << " " << name(v);
                else if (coeff == -1)
                    out << " - " << name(v);
                else
                    out << " " << coeff << " " << name(v);
                first = false;
            } else if (coeff == 1) {
                out << " + " << name(v);
            } else if (coeff == -1) {
                out << " - " << name(v);
            } else if (coeff < 0) {
                out << " - " << -coeff << " " << name(v);
            } else {
                out << " + " << coeff << " " << name(v);
            }
        }
        out << (c.sense == ConstraintSense::LessEq ? " <= " : " = ") << c.rhs << "\n";
    }
    out << "Binary\n";
    for (std::size_t v = 0; v < model.vars.size(); ++v)
        out << " " << name(static_cast<int>(v));
    out << "\nEnd\n";
    return out.str();
}

}  // namespace treedist
