#include "treedist/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "treedist/matching.hpp"

namespace treedist {

const char* to_string(Method method) {
    switch (method) {
        case Method::Dp: return "dp";
        case Method::Naive: return "naive";
        case Method::Oracle: return "oracle";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

// Shared time budget: every solve in one distance call sees the same
// deadline, so subproblem solves decrement what the combiner gets.
struct Budget {
    std::optional<Clock::time_point> deadline;
    std::optional<long long> node_limit;

    explicit Budget(const SolverConfig& cfg) {
        if (cfg.time_limit_seconds)
            deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(*cfg.time_limit_seconds));
        node_limit = cfg.node_limit;
    }

    SolverConfig remaining() const {
        SolverConfig cfg;
        cfg.node_limit = node_limit;
        if (deadline) {
            double secs = std::chrono::duration<double>(*deadline - Clock::now()).count();
            cfg.time_limit_seconds = std::max(0.0, secs);
        }
        return cfg;
    }
};

std::vector<NodeId> post_order_nodes(const Tree& t) {
    std::vector<NodeId> order(t.size());
    for (NodeId v = 0; v < t.size(); ++v) order[t.post_order(v)] = v;
    return order;
}

// Pair weights w_{x,y} for all pairs, precomputed once per instance.
std::vector<CostValue> pair_weights(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    std::vector<CostValue> w(static_cast<std::size_t>(t1.size()) * t2.size());
    for (NodeId x = 0; x < t1.size(); ++x)
        for (NodeId y = 0; y < t2.size(); ++y)
            w[static_cast<std::size_t>(x) * t2.size() + y] =
                cost.pair_weight(t1.label(x), t2.label(y));
    return w;
}

WeightTable edit_table(const Tree& t1, const Tree& t2, const CostFunction& cost,
                       const Budget& budget) {
    WeightTable wt(t1.size(), t2.size());
    auto w = pair_weights(t1, t2, cost);
    for (NodeId x : post_order_nodes(t1)) {
        for (NodeId y : post_order_nodes(t2)) {
            std::size_t i = wt.idx(x, y);
            wt.valid[i] = 1;
            if (t1.is_leaf(x) || t2.is_leaf(y)) {
                wt.weight[i] = w[i];
                continue;
            }
            IlpModel model = build_dp_subproblem(t1, x, t2, y, wt, cost);
            IlpSolution sol = solve(model, budget.remaining());
            wt.solver_nodes += sol.nodes_explored;
            ++wt.subproblem_count;
            if (sol.status != SolveStatus::Optimal) wt.exact = false;
            wt.weight[i] = sol.best_value + model.constant_term;
            for (std::size_t v = 0; v < model.vars.size(); ++v)
                if (sol.assignment[v]) wt.witness[i].emplace_back(model.vars[v].x, model.vars[v].y);
        }
    }
    return wt;
}

enum class VariantRule { Segmental, BottomUpSegmental, BottomUp };

WeightTable variant_table(const Tree& t1, const Tree& t2, const CostFunction& cost,
                          VariantRule rule) {
    WeightTable wt(t1.size(), t2.size());
    auto w = pair_weights(t1, t2, cost);
    for (NodeId x : post_order_nodes(t1)) {
        for (NodeId y : post_order_nodes(t2)) {
            std::size_t i = wt.idx(x, y);
            bool leaf1 = t1.is_leaf(x), leaf2 = t2.is_leaf(y);

            if (rule == VariantRule::BottomUp && !structurally_isomorphic(t1, x, t2, y)) {
                wt.weight[i] = 0;  // invalid
                continue;
            }
            if (leaf1 && leaf2) {
                wt.weight[i] = w[i];
                wt.valid[i] = 1;
                continue;
            }
            if (leaf1 || leaf2) {
                if (rule == VariantRule::Segmental) {
                    wt.weight[i] = w[i];
                    wt.valid[i] = 1;
                }
                // Bottom-up segmental: a pair with exactly one leaf can
                // never be in a valid mapping, so W stays 0 and invalid.
                // Bottom-up: shapes differ, already handled above.
                continue;
            }

            const auto& cx = t1.children(x);
            const auto& cy = t2.children(y);
            WeightMatrix edges(static_cast<int>(cx.size()), static_cast<int>(cy.size()));
            for (std::size_t a = 0; a < cx.size(); ++a)
                for (std::size_t b = 0; b < cy.size(); ++b) {
                    std::size_t j = wt.idx(cx[a], cy[b]);
                    if (rule == VariantRule::BottomUp)
                        edges.at(static_cast<int>(a), static_cast<int>(b)) =
                            wt.valid[j] ? wt.weight[j] : WeightMatrix::kForbidden;
                    else
                        edges.at(static_cast<int>(a), static_cast<int>(b)) = wt.weight[j];
                }

            if (rule == VariantRule::BottomUp) {
                auto bij = max_weight_bijection(edges);
                if (!bij)
                    throw std::logic_error(
                        "weights_bottomup: isomorphic pair admits no children bijection");
                wt.weight[i] = w[i] + bij->value;
                wt.valid[i] = 1;
                for (auto [a, b] : bij->pairs) wt.witness[i].emplace_back(cx[a], cy[b]);
                continue;
            }

            MatchingResult match = max_weight_matching(edges);
            if (rule == VariantRule::BottomUpSegmental && match.value == 0) {
                // An optimal mapping below (x, y) would be the bare pair,
                // which has no leaf support.
                wt.weight[i] = 0;
                continue;
            }
            wt.weight[i] = w[i] + match.value;
            wt.valid[i] = 1;
            for (auto [a, b] : match.pairs) wt.witness[i].emplace_back(cx[a], cy[b]);
        }
    }
    return wt;
}

void expand_witness(const WeightTable& wt, MappingClass cls, NodeId x, NodeId y, Mapping& out) {
    out.emplace_back(x, y);
    for (auto [c, d] : wt.witness[wt.idx(x, y)]) {
        // Zero-weight selections are cost-neutral and dropped, except for
        // the bottom-up class where the children bijection must stay whole.
        if (cls != MappingClass::BottomUp && wt.w(c, d) == 0) continue;
        expand_witness(wt, cls, c, d, out);
    }
}

DistanceResult dp_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                           const DistanceOptions& opts, const Budget& budget) {
    DistanceResult out;
    WeightTable wt = compute_weights(t1, t2, cost, opts.cls, budget.remaining());
    IlpModel combiner = build_combiner(t1, t2, wt);
    IlpSolution sol = solve(combiner, budget.remaining());

    out.distance = distance_from_weight(cost, t1, t2, sol.best_value);
    out.exact = wt.exact && sol.status == SolveStatus::Optimal;
    out.stats.solver_nodes = wt.solver_nodes + sol.nodes_explored;
    out.stats.subproblem_count = wt.subproblem_count;
    for (std::size_t v = 0; v < combiner.vars.size(); ++v) {
        if (!sol.assignment[v]) continue;
        const auto& var = combiner.vars[v];
        if (wt.w(var.x, var.y) == 0) continue;  // zero-weight root: dropped
        expand_witness(wt, opts.cls, var.x, var.y, out.mapping);
    }
    normalize_mapping(out.mapping);
    return out;
}

DistanceResult naive_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                              const DistanceOptions& opts, const Budget& budget) {
    IlpModel model;
    switch (opts.cls) {
        case MappingClass::Edit: model = build_naive_tai(t1, t2, cost); break;
        case MappingClass::Segmental: model = build_naive_segmental(t1, t2, cost); break;
        case MappingClass::BottomUpSegmental: model = build_naive_botseg(t1, t2, cost); break;
        case MappingClass::BottomUp: model = build_naive_bottomup(t1, t2, cost); break;
    }
    IlpSolution sol = solve(model, budget.remaining());
    DistanceResult out;
    out.distance = model.constant_term - sol.best_value;
    out.exact = sol.status == SolveStatus::Optimal;
    out.stats.solver_nodes = sol.nodes_explored;
    for (std::size_t v = 0; v < model.vars.size(); ++v)
        if (sol.assignment[v]) out.mapping.emplace_back(model.vars[v].x, model.vars[v].y);
    normalize_mapping(out.mapping);
    return out;
}

}  // namespace

WeightTable compute_weights(const Tree& t1, const Tree& t2, const CostFunction& cost,
                            MappingClass cls, const SolverConfig& solver) {
    switch (cls) {
        case MappingClass::Edit: return edit_table(t1, t2, cost, Budget(solver));
        case MappingClass::Segmental:
            return variant_table(t1, t2, cost, VariantRule::Segmental);
        case MappingClass::BottomUpSegmental:
            return variant_table(t1, t2, cost, VariantRule::BottomUpSegmental);
        case MappingClass::BottomUp:
            return variant_table(t1, t2, cost, VariantRule::BottomUp);
    }
    throw std::invalid_argument("unknown mapping class");
}

WeightTable weights_edit(const Tree& t1, const Tree& t2, const CostFunction& cost,
                         const SolverConfig& solver) {
    return compute_weights(t1, t2, cost, MappingClass::Edit, solver);
}

WeightTable weights_segmental(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    return compute_weights(t1, t2, cost, MappingClass::Segmental);
}

WeightTable weights_botseg(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    return compute_weights(t1, t2, cost, MappingClass::BottomUpSegmental);
}

WeightTable weights_bottomup(const Tree& t1, const Tree& t2, const CostFunction& cost) {
    return compute_weights(t1, t2, cost, MappingClass::BottomUp);
}

DistanceResult compute_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                                const DistanceOptions& opts) {
    auto start = Clock::now();
    Budget budget(opts.solver);
    DistanceResult out;
    switch (opts.method) {
        case Method::Oracle: {
            BruteForceResult r =
                brute_force_distance(t1, t2, cost, opts.cls, opts.oracle_node_cap);
            out.distance = r.distance;
            out.mapping = std::move(r.mapping);
            break;
        }
        case Method::Naive: out = naive_distance(t1, t2, cost, opts, budget); break;
        case Method::Dp: out = dp_distance(t1, t2, cost, opts, budget); break;
    }
    out.scale = cost.scale();
    out.stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
}

}  // namespace treedist
