#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace treedist {

/// Rectangular weight matrix for bipartite matching. Entries are exact
/// nonnegative integers or kForbidden, which excludes the edge entirely
/// (it is never treated as a large negative weight).
class WeightMatrix {
public:
    static constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::min();

    WeightMatrix(int rows, int cols, std::int64_t fill = 0)
        : rows_(rows), cols_(cols), w_(static_cast<std::size_t>(rows) * cols, fill) {}

    static WeightMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::int64_t& at(int i, int j) { return w_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::int64_t at(int i, int j) const { return w_[static_cast<std::size_t>(i) * cols_ + j]; }
    bool forbidden(int i, int j) const { return at(i, j) == kForbidden; }

private:
    int rows_, cols_;
    std::vector<std::int64_t> w_;
};

struct MatchingResult {
    std::int64_t value = 0;
    std::vector<std::pair<int, int>> pairs;  // sorted
};

/// Maximum-weight matching, not necessarily perfect. Forbidden edges are
/// excluded; with nonnegative weights this equals the assignment optimum
/// with zero-weight dummy vertices. Among optima, returns the
/// lexicographically smallest pair list (so zero-weight edges are left out).
MatchingResult max_weight_matching(const WeightMatrix& w);

/// Maximum-weight perfect matching. Absent when rows != cols or when no
/// perfect matching avoids the forbidden edges. Ties broken like
/// max_weight_matching.
std::optional<MatchingResult> max_weight_bijection(const WeightMatrix& w);

}  // namespace treedist
