#include "treedist/matching.hpp"

#include <algorithm>
#include <stdexcept>

#include "treedist/detail/assignment.hpp"

namespace treedist::detail {

std::optional<AssignmentResult> solve_assignment_min(
    int n, const std::vector<std::vector<std::int64_t>>& cost) {
    std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0);  // 1-based; match[j] = row matched to column j
    for (int i = 1; i <= n; ++i) {
        std::vector<std::int64_t> minv(n + 1, kAssignInf);
        std::vector<int> way(n + 1, 0);
        std::vector<bool> used(n + 1, false);
        int j0 = 0;
        match[0] = i;
        do {
            used[j0] = true;
            int i0 = match[j0], j1 = -1;
            std::int64_t delta = kAssignInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                std::int64_t c = cost[i0 - 1][j - 1];
                if (c != kAssignInf) {
                    std::int64_t cur = c - u[i0] - v[j];
                    if (cur < minv[j]) {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (delta == kAssignInf) return std::nullopt;  // no reachable free column
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else if (minv[j] != kAssignInf) {  // keep unreachable columns unreachable
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        // Augment along the alternating path.
        while (j0 != 0) {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        }
    }
    AssignmentResult out;
    out.row_to_col.assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] != 0) out.row_to_col[match[j] - 1] = j - 1;
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

}  // namespace treedist::detail

namespace treedist {

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    if (rows.empty()) return WeightMatrix(0, 0);
    WeightMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols())
            throw std::invalid_argument("ragged weight matrix");
        for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

namespace {

constexpr std::int64_t kInf = detail::kAssignInf;

std::optional<std::vector<int>> solve_assignment_min(
    int n, const std::vector<std::vector<std::int64_t>>& cost) {
    auto result = detail::solve_assignment_min(n, cost);
    if (!result) return std::nullopt;
    return std::move(result->row_to_col);
}

struct Constraints {
    std::vector<std::pair<int, int>> forced;    // disjoint, allowed
    std::vector<std::pair<int, int>> excluded;  // treated as forbidden
};

bool edge_usable(const WeightMatrix& w, const Constraints& c, int i, int j) {
    if (w.forbidden(i, j)) return false;
    return std::find(c.excluded.begin(), c.excluded.end(), std::make_pair(i, j)) ==
           c.excluded.end();
}

// Optimal value of the free (not necessarily perfect) matching under the
// constraints, via a padded square assignment: real rows may match dummy
// columns and vice versa at weight 0, so a perfect matching always exists.
std::int64_t free_value(const WeightMatrix& w, const Constraints& c) {
    std::vector<int> rows, cols;
    std::vector<bool> row_used(w.rows(), false), col_used(w.cols(), false);
    std::int64_t forced_value = 0;
    for (auto [i, j] : c.forced) {
        forced_value += w.at(i, j);
        row_used[i] = true;
        col_used[j] = true;
    }
    for (int i = 0; i < w.rows(); ++i)
        if (!row_used[i]) rows.push_back(i);
    for (int j = 0; j < w.cols(); ++j)
        if (!col_used[j]) cols.push_back(j);

    const int p = static_cast<int>(rows.size()), q = static_cast<int>(cols.size());
    const int n = p + q;
    if (n == 0) return forced_value;
    std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n, 0));
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b)
            cost[a][b] =
                edge_usable(w, c, rows[a], cols[b]) ? -w.at(rows[a], cols[b]) : kInf;
    // Dummy rows/columns stay at cost 0 and absorb anything unmatched.
    auto match = solve_assignment_min(n, cost);
    // With the dummy padding a perfect matching always exists.
    if (!match) throw std::logic_error("padded assignment infeasible");
    std::int64_t value = forced_value;
    for (int a = 0; a < p; ++a) {
        int b = (*match)[a];
        if (b < q) value += w.at(rows[a], cols[b]);
    }
    return value;
}

// Optimal value of the perfect matching under the constraints, or nullopt.
std::optional<std::int64_t> perfect_value(const WeightMatrix& w, const Constraints& c) {
    std::vector<int> rows, cols;
    std::vector<bool> row_used(w.rows(), false), col_used(w.cols(), false);
    std::int64_t forced_value = 0;
    for (auto [i, j] : c.forced) {
        forced_value += w.at(i, j);
        row_used[i] = true;
        col_used[j] = true;
    }
    for (int i = 0; i < w.rows(); ++i)
        if (!row_used[i]) rows.push_back(i);
    for (int j = 0; j < w.cols(); ++j)
        if (!col_used[j]) cols.push_back(j);
    if (rows.size() != cols.size()) return std::nullopt;
    const int n = static_cast<int>(rows.size());
    if (n == 0) return forced_value;
    std::vector<std::vector<std::int64_t>> cost(n, std::vector<std::int64_t>(n, kInf));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (edge_usable(w, c, rows[a], cols[b])) cost[a][b] = -w.at(rows[a], cols[b]);
    auto match = solve_assignment_min(n, cost);
    if (!match) return std::nullopt;
    std::int64_t value = forced_value;
    for (int a = 0; a < n; ++a) value += w.at(rows[a], cols[(*match)[a]]);
    return value;
}

// Builds the lexicographically smallest optimal pair list by deciding
// candidate pairs in lex order: a pair is kept iff some optimum consistent
// with all previous decisions contains it.
template <typename OptValueFn>
std::vector<std::pair<int, int>> canonical_pairs(const WeightMatrix& w, std::int64_t target,
                                                 bool stop_when_reached, OptValueFn opt_value) {
    Constraints c;
    std::int64_t kept_value = 0;
    std::vector<bool> row_used(w.rows(), false), col_used(w.cols(), false);
    for (int i = 0; i < w.rows(); ++i) {
        if (stop_when_reached && kept_value == target) break;
        for (int j = 0; j < w.cols(); ++j) {
            if (row_used[i]) break;
            if (col_used[j] || !edge_usable(w, c, i, j)) continue;
            if (stop_when_reached && kept_value == target) break;
            Constraints trial = c;
            trial.forced.emplace_back(i, j);
            std::optional<std::int64_t> v = opt_value(trial);
            if (v && *v == target) {
                c = std::move(trial);
                kept_value += w.at(i, j);
                row_used[i] = true;
                col_used[j] = true;
            } else {
                c.excluded.emplace_back(i, j);
            }
        }
    }
    std::sort(c.forced.begin(), c.forced.end());
    return c.forced;
}

}  // namespace

MatchingResult max_weight_matching(const WeightMatrix& w) {
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            if (!w.forbidden(i, j) && w.at(i, j) < 0)
                throw std::invalid_argument("max_weight_matching: negative weight");
    if (w.rows() == 0 || w.cols() == 0) return {};
    Constraints none;
    std::int64_t target = free_value(w, none);
    MatchingResult out;
    out.value = target;
    out.pairs = canonical_pairs(w, target, /*stop_when_reached=*/true,
                                [&](const Constraints& c) -> std::optional<std::int64_t> {
                                    return free_value(w, c);
                                });
    return out;
}

std::optional<MatchingResult> max_weight_bijection(const WeightMatrix& w) {
    for (int i = 0; i < w.rows(); ++i)
        for (int j = 0; j < w.cols(); ++j)
            if (!w.forbidden(i, j) && w.at(i, j) < 0)
                throw std::invalid_argument("max_weight_bijection: negative weight");
    if (w.rows() != w.cols()) return std::nullopt;
    Constraints none;
    std::optional<std::int64_t> target = perfect_value(w, none);
    if (!target) return std::nullopt;
    MatchingResult out;
    out.value = *target;
    out.pairs = canonical_pairs(w, *target, /*stop_when_reached=*/false,
                                [&](const Constraints& c) { return perfect_value(w, c); });
    return out;
}

}  // namespace treedist
