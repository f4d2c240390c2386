#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treedist/ilp.hpp"

namespace treedist {

struct SolverConfig {
    std::optional<double> time_limit_seconds;
    std::optional<long long> node_limit;
};

enum class SolveStatus { Optimal, Timeout, Infeasible };

const char* to_string(SolveStatus status);

struct IlpSolution {
    SolveStatus status = SolveStatus::Optimal;
    /// Maximum of the variable objective (constant_term not included).
    /// A lower bound on the optimum when status is Timeout.
    CostValue best_value = 0;
    std::vector<std::uint8_t> assignment;
    long long nodes_explored = 0;
};

/// Exact depth-first 0-1 branch and bound. Requires nonnegative objective
/// coefficients (throws otherwise). Branches on the unfixed variable with
/// the highest coefficient (ties: lowest index), value 1 first; fixing a
/// variable to 1 propagates zeros through pure packing rows. Deterministic:
/// the same model and config always yield the same assignment.
IlpSolution solve(const IlpModel& model, const SolverConfig& cfg = {});

}  // namespace treedist
