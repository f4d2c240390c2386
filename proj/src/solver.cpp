#include "treedist/solver.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "treedist/detail/assignment.hpp"

namespace treedist {

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Optimal: return "ok";
        case SolveStatus::Timeout: return "timeout";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

struct RowState {
    CostValue rhs = 0;
    ConstraintSense sense = ConstraintSense::LessEq;
    CostValue fixed_sum = 0;  // contribution of fixed variables
    CostValue min_rest = 0;   // min possible contribution of unfixed variables
    CostValue max_rest = 0;   // max possible contribution
    bool packing = false;     // all +1 coefficients, rhs 1, <=

    bool possible() const {
        if (fixed_sum + min_rest > rhs) return false;
        if (sense == ConstraintSense::Eq && fixed_sum + max_rest < rhs) return false;
        return true;
    }
};

class BranchAndBound {
public:
    BranchAndBound(const IlpModel& model, const SolverConfig& cfg) : model_(model) {
        const int nv = static_cast<int>(model.vars.size());
        CostValue coeff_sum = 0;
        for (const auto& v : model.vars) {
            if (v.coeff < 0) throw std::logic_error("solver: negative objective coefficient");
            coeff_sum += v.coeff;
            if (coeff_sum < 0 || coeff_sum > (CostValue{1} << 62))
                throw std::logic_error("solver: objective overflow");
        }
        sum_free_ = coeff_sum;

        rows_.resize(model.constraints.size());
        var_rows_.resize(nv);
        for (std::size_t r = 0; r < model.constraints.size(); ++r) {
            const auto& c = model.constraints[r];
            RowState& row = rows_[r];
            row.rhs = c.rhs;
            row.sense = c.sense;
            row.packing = c.sense == ConstraintSense::LessEq && c.rhs == 1;
            for (auto [var, coeff] : c.terms) {
                row.min_rest += std::min<CostValue>(coeff, 0);
                row.max_rest += std::max<CostValue>(coeff, 0);
                row.packing = row.packing && coeff == 1;
                var_rows_[var].emplace_back(static_cast<int>(r), coeff);
            }
        }
        row_members_.resize(model.constraints.size());
        for (std::size_t r = 0; r < model.constraints.size(); ++r)
            for (auto [var, coeff] : model.constraints[r].terms)
                row_members_[r].push_back(var);

        // Partition each variable into one packing row (first and last) for
        // the per-row maximum bound; -1 when the variable is in none.
        part_first_.assign(nv, -1);
        part_last_.assign(nv, -1);
        for (int v = 0; v < nv; ++v)
            for (auto [r, coeff] : var_rows_[v])
                if (rows_[r].packing) {
                    if (part_first_[v] < 0) part_first_[v] = r;
                    part_last_[v] = r;
                }

        order_.resize(nv);
        for (int i = 0; i < nv; ++i) order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
            return model.vars[a].coeff > model.vars[b].coeff;
        });

        state_.assign(nv, kFree);
        if (cfg.time_limit_seconds)
            deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                           std::chrono::duration<double>(*cfg.time_limit_seconds));
        node_limit_ = cfg.node_limit;
        row_max_epoch_.assign(model.constraints.size(), 0);
        row_max_val_.assign(model.constraints.size(), 0);

        for (const BoundForest& f : model.bound_forests) {
            ForestData data;
            data.parent = f.group_parent;
            data.var_group = f.var_group;
            data.groups_by_x = f.groups_by_x;
            const int groups = static_cast<int>(f.group_parent.size());
            // Children-before-parent evaluation order; group ids do not
            // guarantee it in general, so sort by a computed depth.
            std::vector<int> depth(groups, 0);
            for (int g = 0; g < groups; ++g) {
                int d = 0;
                for (int p = f.group_parent[g]; p >= 0; p = f.group_parent[p]) ++d;
                depth[g] = d;
            }
            data.order.resize(groups);
            for (int g = 0; g < groups; ++g) data.order[g] = g;
            std::stable_sort(data.order.begin(), data.order.end(),
                             [&](int a, int b) { return depth[a] > depth[b]; });
            data.group_max.assign(groups, 0);
            data.value.assign(groups, 0);
            data.arg_other.assign(groups, -1);
            data.children.resize(groups);
            for (int g = 0; g < groups; ++g)
                if (data.parent[g] >= 0) data.children[data.parent[g]].push_back(g);
            forests_.push_back(std::move(data));
        }
    }

    IlpSolution run() {
        // Seed the incumbent with the all-zero assignment when feasible; for
        // every model built in this library it is.
        bool zero_ok = true;
        for (const auto& row : rows_) {
            if (row.rhs < 0 && row.sense == ConstraintSense::LessEq) zero_ok = false;
            if (row.sense == ConstraintSense::Eq && row.rhs != 0) zero_ok = false;
        }
        if (zero_ok) {
            have_best_ = true;
            best_value_ = 0;
            best_assignment_.assign(model_.vars.size(), 0);
        }

        dfs(0);

        IlpSolution out;
        out.nodes_explored = nodes_;
        if (!have_best_) {
            out.status = SolveStatus::Infeasible;
            out.best_value = 0;
            out.assignment.assign(model_.vars.size(), 0);
            return out;
        }
        out.status = stopped_ ? SolveStatus::Timeout : SolveStatus::Optimal;
        out.best_value = best_value_;
        out.assignment = std::move(best_assignment_);
        return out;
    }

private:
    static constexpr std::int8_t kFree = -1;

    struct ForestData {
        std::vector<int> parent;
        std::vector<std::vector<int>> children;
        std::vector<int> var_group;
        std::vector<int> order;  // children before parents
        std::vector<CostValue> group_max, value;
        std::vector<int> arg_other;  // refinement scratch
        bool groups_by_x = true;
    };

    bool limits_hit() {
        if (node_limit_ && nodes_ >= *node_limit_) return true;
        if (deadline_ && (nodes_ & 1023) == 0 && Clock::now() >= *deadline_) return true;
        return false;
    }

    // Fixes a variable, updating row aggregates; returns false on an
    // impossible row. The trail records the fix either way.
    bool fix(int var, std::int8_t val) {
        state_[var] = val;
        trail_.push_back(var);
        sum_free_ -= model_.vars[var].coeff;
        if (val == 1) fixed_one_sum_ += model_.vars[var].coeff;
        bool ok = true;
        for (auto [r, coeff] : var_rows_[var]) {
            RowState& row = rows_[r];
            row.fixed_sum += val ? coeff : 0;
            row.min_rest -= std::min<CostValue>(coeff, 0);
            row.max_rest -= std::max<CostValue>(coeff, 0);
            if (!row.possible()) ok = false;
        }
        return ok;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            int var = trail_.back();
            trail_.pop_back();
            std::int8_t val = state_[var];
            state_[var] = kFree;
            sum_free_ += model_.vars[var].coeff;
            if (val == 1) fixed_one_sum_ -= model_.vars[var].coeff;
            for (auto [r, coeff] : var_rows_[var]) {
                RowState& row = rows_[r];
                row.fixed_sum -= val ? coeff : 0;
                row.min_rest += std::min<CostValue>(coeff, 0);
                row.max_rest += std::max<CostValue>(coeff, 0);
            }
        }
    }

    // Fix var to 1 and propagate packing rows: every other unfixed member of
    // a packing row containing a 1 goes to 0. Returns false on conflict.
    bool fix_one_and_propagate(int var) {
        if (!fix(var, 1)) return false;
        for (auto [r, coeff] : var_rows_[var]) {
            if (!rows_[r].packing) continue;
            for (int other : row_members_[r]) {
                if (other == var || state_[other] != kFree) continue;
                if (!fix(other, 0)) return false;
            }
        }
        return true;
    }

    // Matching-dual bound, built lazily once the search proves nontrivial.
    // The row constraints of antichain-family models make selected
    // variables pairwise distinct in both coordinates, so any feasible
    // dual (U_x + V_y >= coeff for every variable, U, V >= 0) bounds every
    // completion by fixed ones plus U/V summed over coordinates that still
    // carry free variables. The optimal duals come from one assignment
    // solve over the variable grid; they stay valid as variables get fixed.
    void build_dual_bound() {
        dual_built_ = true;
        if (forests_.size() < 2) return;
        std::vector<int> xs, ys;
        for (const auto& var : model_.vars) {
            xs.push_back(var.x);
            ys.push_back(var.y);
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        const int p = static_cast<int>(xs.size()), q = static_cast<int>(ys.size());
        const int n = p + q;
        if (n == 0 || static_cast<long long>(n) * n * n > 64LL * 1000 * 1000) return;
        std::vector<std::vector<CostValue>> cost(n, std::vector<CostValue>(n, 0));
        auto xi = [&](int x) {
            return static_cast<int>(std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
        };
        auto yi = [&](int y) {
            return static_cast<int>(std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
        };
        for (const auto& var : model_.vars)
            cost[xi(var.x)][yi(var.y)] = -var.coeff;
        auto duals = detail::solve_assignment_min(n, cost);
        if (!duals) return;  // dummy padding makes this unreachable
        const int max_x = xs.empty() ? 0 : xs.back() + 1;
        const int max_y = ys.empty() ? 0 : ys.back() + 1;
        dual_u_.assign(max_x, 0);
        dual_v_.assign(max_y, 0);
        for (int a = 0; a < p; ++a) dual_u_[xs[a]] = std::max<CostValue>(0, -duals->u[a]);
        for (int b = 0; b < q; ++b) dual_v_[ys[b]] = std::max<CostValue>(0, -duals->v[b]);
        x_seen_.assign(max_x, 0);
        y_seen_.assign(max_y, 0);
        dual_ready_ = true;
        refine_prices();
    }

    // Integer subgradient descent on the priced bound: raise the price of
    // overused other-side nodes, lower unused ones, keep the price vector
    // that minimizes the bound. Any nonnegative vector keeps the bound
    // valid, so this is purely a tightening heuristic and may be re-run
    // from any search state.
    void refine_prices() {
        for (ForestData& f : forests_) {
            std::vector<CostValue>& price = f.groups_by_x ? dual_v_ : dual_u_;
            if (price.empty()) continue;
            std::vector<CostValue> best_price = price;
            CostValue best = forest_bound(f, true);
            std::vector<int> uses(price.size());
            std::vector<std::uint8_t> live(price.size());
            for (int iter = 0; iter < 40; ++iter) {
                priced_uses(f, uses, live);
                bool changed = false;
                for (std::size_t o = 0; o < price.size(); ++o) {
                    if (!live[o]) continue;
                    CostValue next = std::max<CostValue>(0, price[o] + (uses[o] - 1));
                    changed = changed || next != price[o];
                    price[o] = next;
                }
                if (!changed) break;
                CostValue b = forest_bound(f, true);
                if (b < best) {
                    best = b;
                    best_price = price;
                }
            }
            price = best_price;
        }
    }

    // How often each other-side node is claimed by the priced DP's argmax
    // selection, and which nodes still carry free variables.
    void priced_uses(ForestData& f, std::vector<int>& uses, std::vector<std::uint8_t>& live) {
        const std::vector<CostValue>& price = f.groups_by_x ? dual_v_ : dual_u_;
        std::fill(uses.begin(), uses.end(), 0);
        std::fill(live.begin(), live.end(), 0);
        std::fill(f.group_max.begin(), f.group_max.end(), 0);
        std::fill(f.arg_other.begin(), f.arg_other.end(), -1);
        for (std::size_t v = 0; v < model_.vars.size(); ++v) {
            if (state_[v] != kFree) continue;
            int other = f.groups_by_x ? model_.vars[v].y : model_.vars[v].x;
            live[other] = 1;
            CostValue coeff =
                std::max<CostValue>(0, model_.vars[v].coeff - price[other]);
            int g = f.var_group[v];
            if (g >= 0 && coeff > f.group_max[g]) {
                f.group_max[g] = coeff;
                f.arg_other[g] = other;
            }
        }
        std::fill(f.value.begin(), f.value.end(), 0);
        for (int g : f.order) {
            f.value[g] = std::max(f.group_max[g], f.value[g]);
            if (f.parent[g] >= 0) f.value[f.parent[g]] += f.value[g];
        }
        // Top-down: a group keeps its own variable when it beats the
        // children sum; otherwise the children are explored.
        std::vector<int> stack;
        for (std::size_t g = 0; g < f.parent.size(); ++g)
            if (f.parent[g] < 0) stack.push_back(static_cast<int>(g));
        std::vector<CostValue> childsum(f.parent.size(), 0);
        for (int g : f.order)
            if (f.parent[g] >= 0) childsum[f.parent[g]] += f.value[g];
        while (!stack.empty()) {
            int g = stack.back();
            stack.pop_back();
            if (f.group_max[g] >= childsum[g]) {
                if (f.arg_other[g] >= 0) ++uses[f.arg_other[g]];
            } else {
                for (int c : f.children[g]) stack.push_back(c);
            }
        }
    }

    // Upper bound from a forest hint: among free variables, groups that are
    // comparable in the forest are mutually exclusive, so the best feasible
    // completion is bounded by a max-independent-set DP over the forest
    // using each group's best free coefficient.
    //
    // With `priced` set, each variable is first charged against the other
    // coordinate's matching dual: coeff <= V_other + (coeff - V_other)+,
    // selections use distinct other-side nodes, so the DP runs on the
    // reduced coefficients and the duals of the other-side nodes that still
    // carry free variables are added once each. This combines the antichain
    // and one-to-one relaxations in a single bound.
    CostValue forest_bound(ForestData& f, bool priced) {
        const std::vector<CostValue>& price = f.groups_by_x ? dual_v_ : dual_u_;
        std::vector<std::uint64_t>& seen = f.groups_by_x ? y_seen_ : x_seen_;
        if (priced) ++dual_epoch_;
        CostValue loose = 0, price_sum = 0;
        std::fill(f.group_max.begin(), f.group_max.end(), 0);
        for (std::size_t v = 0; v < model_.vars.size(); ++v) {
            if (state_[v] != kFree) continue;
            CostValue coeff = model_.vars[v].coeff;
            if (priced) {
                int other = f.groups_by_x ? model_.vars[v].y : model_.vars[v].x;
                if (seen[other] != dual_epoch_) {
                    seen[other] = dual_epoch_;
                    price_sum += price[other];
                }
                coeff = std::max<CostValue>(0, coeff - price[other]);
            }
            int g = f.var_group[v];
            if (g < 0)
                loose += coeff;
            else if (coeff > f.group_max[g])
                f.group_max[g] = coeff;
        }
        std::fill(f.value.begin(), f.value.end(), 0);
        CostValue total = fixed_one_sum_ + loose + price_sum;
        for (int g : f.order) {
            f.value[g] = std::max(f.group_max[g], f.value[g]);  // value holds child sum
            int p = f.parent[g];
            if (p >= 0)
                f.value[p] += f.value[g];
            else
                total += f.value[g];
        }
        return total;
    }

    // Upper bound refinement: any feasible completion picks at most one
    // variable per packing row, so summing each row's best free coefficient
    // (plus free variables outside all packing rows) bounds the rest.
    CostValue partition_bound(const std::vector<int>& part) {
        ++epoch_;
        CostValue bound = fixed_one_sum_;
        for (std::size_t v = 0; v < model_.vars.size(); ++v) {
            if (state_[v] != kFree) continue;
            CostValue coeff = model_.vars[v].coeff;
            int r = part[v];
            if (r < 0) {
                bound += coeff;
            } else if (row_max_epoch_[r] != epoch_) {
                row_max_epoch_[r] = epoch_;
                row_max_val_[r] = coeff;
            } else if (coeff > row_max_val_[r]) {
                row_max_val_[r] = coeff;
            }
        }
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (row_max_epoch_[r] == epoch_) bound += row_max_val_[r];
        return bound;
    }

    bool prunable() {
        CostValue ub = fixed_one_sum_ + sum_free_;
        if (!have_best_) return false;
        if (ub <= best_value_) return true;
        if (!dual_built_ && nodes_ >= kDualThreshold) build_dual_bound();
        if (dual_ready_) {
            // Occasionally re-run the price refinement from the current
            // search state; the bound stays valid for any prices.
            if ((nodes_ & (262144 - 1)) == 0) refine_prices();
            for (ForestData& f : forests_)
                if (forest_bound(f, true) <= best_value_) return true;
        }
        for (ForestData& f : forests_)
            if (forest_bound(f, false) <= best_value_) return true;
        if (forests_.empty()) {
            if (partition_bound(part_first_) <= best_value_) return true;
            if (partition_bound(part_last_) <= best_value_) return true;
        }
        return false;
    }

    void dfs(std::size_t order_pos) {
        while (order_pos < order_.size() && state_[order_[order_pos]] != kFree) ++order_pos;
        if (order_pos == order_.size()) {
            // Complete assignment; aggregates prove feasibility exactly.
            CostValue value = fixed_one_sum_;
            if (!have_best_ || value > best_value_) {
                have_best_ = true;
                best_value_ = value;
                best_assignment_.resize(model_.vars.size());
                for (std::size_t v = 0; v < model_.vars.size(); ++v)
                    best_assignment_[v] = state_[v] == 1 ? 1 : 0;
            }
            return;
        }
        ++nodes_;
        if (stopped_ || limits_hit()) {
            stopped_ = true;
            return;
        }
        if (prunable()) return;

        int var = order_[order_pos];
        std::size_t mark = trail_.size();
        if (fix_one_and_propagate(var)) dfs(order_pos + 1);
        undo_to(mark);
        if (stopped_) return;
        if (fix(var, 0)) dfs(order_pos + 1);
        undo_to(mark);
    }

    const IlpModel& model_;
    std::vector<RowState> rows_;
    std::vector<std::vector<std::pair<int, CostValue>>> var_rows_;
    std::vector<std::vector<int>> row_members_;
    std::vector<int> part_first_, part_last_;
    std::vector<ForestData> forests_;
    std::vector<int> order_;
    std::vector<std::int8_t> state_;
    std::vector<int> trail_;

    CostValue sum_free_ = 0;
    CostValue fixed_one_sum_ = 0;

    bool have_best_ = false;
    CostValue best_value_ = 0;
    std::vector<std::uint8_t> best_assignment_;

    long long nodes_ = 0;
    bool stopped_ = false;
    std::optional<Clock::time_point> deadline_;
    std::optional<long long> node_limit_;

    std::vector<std::uint64_t> row_max_epoch_;
    std::vector<CostValue> row_max_val_;
    std::uint64_t epoch_ = 0;

    static constexpr long long kDualThreshold = 4096;
    bool dual_built_ = false;
    bool dual_ready_ = false;
    std::vector<CostValue> dual_u_, dual_v_;
    std::vector<std::uint64_t> x_seen_, y_seen_;
    std::uint64_t dual_epoch_ = 0;
};

}  // namespace

IlpSolution solve(const IlpModel& model, const SolverConfig& cfg) {
    return BranchAndBound(model, cfg).run();
}

}  // namespace treedist
