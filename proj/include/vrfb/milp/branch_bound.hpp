// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "vrfb/milp/problem.hpp"
#include "vrfb/milp/simplex.hpp"

namespace vrfb::milp {

struct MilpOptions {
    double gap_tol = 1e-6;     // relative optimality gap
    double gap_abs = 1e-9;     // absolute gap floor, objective units
    double time_limit = 120.0; // seconds
    long max_nodes = 5'000'000;
    double int_tol = 1e-6;
    bool rounding_heuristic = true;
    LpOptions lp;
    // observer for (global bound, incumbent) after each node; used by tests
    std::function<void(double, double)> on_progress;
    // problem-aware rounding: maps a relaxation point to a full binary
    // assignment to try; consulted before plain rounding
    std::function<std::vector<std::pair<int, char>>(const std::vector<double>&)>
        custom_rounding;
};

/// Best-first branch and bound on the LP relaxation, branching on the
/// most-fractional binary. Throws std::runtime_error if the time limit is
/// hit before any incumbent exists.
Solution solve_milp(const Problem& p, const MilpOptions& opts = {});

/// One discrete state of a group of binaries: the columns it pins and their
/// 0/1 values.
struct BinaryChoice {
    std::vector<std::pair<int, double>> fixes;
};

/// Exhaustive oracle: tries every combination from the per-group choice
/// lists (cartesian product), fixes the binaries, eliminates them from the
/// problem, solves the remaining LP and returns the best feasible result.
/// Every binary column of `p` must be covered by each combination.
Solution brute_force_enumerate(const Problem& p,
                               const std::vector<std::vector<BinaryChoice>>& groups,
                               const LpOptions& opts = {}, int threads = 1);

}  // namespace vrfb::milp
