// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "vrfb/milp/problem.hpp"

namespace vrfb::milp {

struct LpOptions {
    double feas_tol = 1e-7;    // feasibility tolerance on the original data
    double opt_tol = 1e-9;     // reduced-cost threshold on the scaled problem
    long max_iterations = 0;   // 0 -> automatic (scales with problem size)
    bool use_devex = true;     // devex pricing; Bland kicks in on stalls either way
};

/// Revised simplex with bounded variables, two phases (explicit artificials)
/// and Bland's rule as the anti-cycling fallback. The basis inverse is kept
/// dense and updated per pivot; it is rebuilt when numerics drift.
///
/// A workspace is reusable across solves of problems with identical rows and
/// columns but different bounds, which is what branch-and-bound needs.
class SimplexWorkspace {
public:
    /// Bind to a problem's structure (rows, coefficients, objective).
    void setup(const Problem& p);

    /// Solve with the problem's own bounds.
    Solution solve(const LpOptions& opts = {});

    /// Solve with overriding column bounds (same sizes as the problem).
    Solution solve_with_bounds(const std::vector<double>& lo,
                               const std::vector<double>& hi,
                               const LpOptions& opts = {});

    /// Dual bound computed from the final multipliers; equals the objective
    /// at a verified optimum and stays a valid upper bound otherwise.
    double dual_bound() const { return dual_bound_; }

private:
    enum ColStatus : char { kNonbasicLower, kNonbasicUpper, kNonbasicFree, kBasic };

    int m_ = 0;        // rows
    int n_struct_ = 0; // structural columns
    int n_total_ = 0;  // structural + slack + artificial

    // column-wise structural matrix (scaled)
    std::vector<int> col_start_, col_row_;
    std::vector<double> col_val_;
    std::vector<double> obj_scaled_;
    std::vector<double> rhs_scaled_;
    std::vector<RowSense> sense_;
    std::vector<double> row_scale_, col_scale_;
    std::vector<double> lo_orig_, hi_orig_;  // original structural bounds

    // per-solve state
    std::vector<double> lo_, hi_;      // scaled working bounds, all columns
    std::vector<double> xval_;         // values of nonbasic columns
    std::vector<char> status_;
    std::vector<int> basis_;           // column index per row
    std::vector<double> binv_;         // dense row-major m x m
    std::vector<double> xb_, y_, alpha_, pivot_row_, work_cost_;
    std::vector<double> devex_w_;
    std::vector<signed char> art_sign_;
    double dual_bound_ = 0.0;

    const Problem* problem_ = nullptr;

    // helpers
    void compute_scaling(const Problem& p);
    void build_columns(const Problem& p);
    void reset_bounds(const std::vector<double>& lo, const std::vector<double>& hi);
    void initial_basis();
    int price(const std::vector<double>& cost, bool bland, double tol) const;
    void ftran(int col, std::vector<double>& out) const;
    void btran_cost(const std::vector<double>& cost, std::vector<double>& y) const;
    double entry_dot(int col, const std::vector<double>& v) const;
    void column_entries(int col, std::vector<std::pair<int, double>>& out) const;
    bool refactorize();
    void recompute_xb();
    int run_simplex(const std::vector<double>& cost, bool phase_one,
                    const LpOptions& opts, long& iters, long iter_budget);
    Solution finish(const LpOptions& opts, long iters, int term, bool phase1_feasible);
};

/// Solve the LP relaxation of `p` (integrality ignored).
Solution solve_lp(const Problem& p, const LpOptions& opts = {});

}  // namespace vrfb::milp
