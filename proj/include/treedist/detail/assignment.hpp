#pragma once

// Internal shared Hungarian core (minimization with potentials). Used by
// the matching module and by the solver's matching-dual bound.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace treedist::detail {

inline constexpr std::int64_t kAssignInf = std::numeric_limits<std::int64_t>::max();

struct AssignmentResult {
    std::vector<int> row_to_col;  // per row; always a full permutation
    std::vector<std::int64_t> u, v;  // dual potentials, u[i] + v[j] <= cost[i][j]
};

/// Min-cost perfect assignment on an n x n matrix; kAssignInf marks a
/// missing edge. Returns nullopt when no perfect matching over existing
/// edges exists.
std::optional<AssignmentResult> solve_assignment_min(
    int n, const std::vector<std::vector<std::int64_t>>& cost);

}  // namespace treedist::detail
