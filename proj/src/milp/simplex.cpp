// SPDX-License-Identifier: Apache-2.0
#include "vrfb/milp/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <cstdlib>

namespace vrfb::milp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasEps = 1e-9;

double nearest_bound_value(double lo, double hi) {
    if (lo == -kInf && hi == kInf) return 0.0;
    if (lo == -kInf) return hi;
    if (hi == kInf) return lo;
    return std::abs(lo) <= std::abs(hi) ? lo : hi;
}

double pow2_scale(double v) {
    if (v <= 0.0 || !std::isfinite(v)) return 1.0;
    int e = 0;
    std::frexp(v, &e);
    double s = std::ldexp(1.0, -e + 1);  // brings v into [0.5, 1]
    return std::clamp(s, 1.0 / 1048576.0, 1048576.0);
}

}  // namespace

void SimplexWorkspace::compute_scaling(const Problem& p) {
    const int m = p.num_rows();
    const int n = p.num_cols();
    row_scale_.assign(m, 1.0);
    col_scale_.assign(n, 1.0);
    for (int round = 0; round < 2; ++round) {
        for (int i = 0; i < m; ++i) {
            double mx = 0.0;
            for (const auto& [c, v] : p.row(i))
                mx = std::max(mx, std::abs(v) * col_scale_[c]);
            if (mx > 0) row_scale_[i] = pow2_scale(mx);
        }
        std::vector<double> colmax(n, 0.0);
        for (int i = 0; i < m; ++i)
            for (const auto& [c, v] : p.row(i))
                colmax[c] = std::max(colmax[c], std::abs(v) * row_scale_[i]);
        for (int j = 0; j < n; ++j)
            if (colmax[j] > 0) col_scale_[j] = pow2_scale(colmax[j]);
    }
}

void SimplexWorkspace::build_columns(const Problem& p) {
    const int m = p.num_rows();
    const int n = p.num_cols();
    std::vector<int> count(n, 0);
    for (int i = 0; i < m; ++i)
        for (const auto& [c, v] : p.row(i)) {
            (void)v;
            ++count[c];
        }
    col_start_.assign(n + 1, 0);
    for (int j = 0; j < n; ++j) col_start_[j + 1] = col_start_[j] + count[j];
    col_row_.assign(col_start_[n], 0);
    col_val_.assign(col_start_[n], 0.0);
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m; ++i)
        for (const auto& [c, v] : p.row(i)) {
            col_row_[fill[c]] = i;
            col_val_[fill[c]] = v * row_scale_[i] * col_scale_[c];
            ++fill[c];
        }
}

void SimplexWorkspace::setup(const Problem& p) {
    p.validate();
    problem_ = &p;
    m_ = p.num_rows();
    n_struct_ = p.num_cols();
    n_total_ = n_struct_ + 2 * m_;
    compute_scaling(p);
    build_columns(p);

    obj_scaled_.assign(n_total_, 0.0);
    for (int j = 0; j < n_struct_; ++j)
        obj_scaled_[j] = p.objective()[j] * col_scale_[j];

    rhs_scaled_.resize(m_);
    sense_.resize(m_);
    for (int i = 0; i < m_; ++i) {
        rhs_scaled_[i] = p.row_rhs(i) * row_scale_[i];
        sense_[i] = p.row_sense(i);
    }
    lo_orig_ = p.lower();
    hi_orig_ = p.upper();

    lo_.assign(n_total_, 0.0);
    hi_.assign(n_total_, 0.0);
    xval_.assign(n_total_, 0.0);
    status_.assign(n_total_, kNonbasicLower);
    basis_.assign(m_, -1);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    xb_.assign(m_, 0.0);
    y_.assign(m_, 0.0);
    alpha_.assign(m_, 0.0);
    pivot_row_.assign(m_, 0.0);
    work_cost_.assign(n_total_, 0.0);
    devex_w_.assign(n_total_, 1.0);
    art_sign_.assign(m_, 1);
}

void SimplexWorkspace::reset_bounds(const std::vector<double>& lo,
                                    const std::vector<double>& hi) {
    for (int j = 0; j < n_struct_; ++j) {
        const double cs = col_scale_[j];
        lo_[j] = lo[j] == -kInf ? -kInf : lo[j] / cs;
        hi_[j] = hi[j] == kInf ? kInf : hi[j] / cs;
    }
    for (int i = 0; i < m_; ++i) {
        const int j = n_struct_ + i;
        switch (sense_[i]) {
            case RowSense::LessEqual:
                lo_[j] = 0.0;
                hi_[j] = kInf;
                break;
            case RowSense::GreaterEqual:
                lo_[j] = -kInf;
                hi_[j] = 0.0;
                break;
            case RowSense::Equal:
                lo_[j] = hi_[j] = 0.0;
                break;
        }
    }
    for (int i = 0; i < m_; ++i) {
        const int j = n_struct_ + m_ + i;
        lo_[j] = 0.0;
        hi_[j] = kInf;  // shrinks to [0,0] for phase 2
    }
}

void SimplexWorkspace::column_entries(int col,
                                      std::vector<std::pair<int, double>>& out) const {
    out.clear();
    if (col < n_struct_) {
        for (int k = col_start_[col]; k < col_start_[col + 1]; ++k)
            out.emplace_back(col_row_[k], col_val_[k]);
    } else if (col < n_struct_ + m_) {
        out.emplace_back(col - n_struct_, 1.0);
    } else {
        const int i = col - n_struct_ - m_;
        out.emplace_back(i, static_cast<double>(art_sign_[i]));
    }
}

double SimplexWorkspace::entry_dot(int col, const std::vector<double>& v) const {
    if (col < n_struct_) {
        double s = 0.0;
        for (int k = col_start_[col]; k < col_start_[col + 1]; ++k)
            s += col_val_[k] * v[col_row_[k]];
        return s;
    }
    if (col < n_struct_ + m_) return v[col - n_struct_];
    const int i = col - n_struct_ - m_;
    return v[i] * art_sign_[i];
}

void SimplexWorkspace::ftran(int col, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (col < n_struct_) {
        for (int k = col_start_[col]; k < col_start_[col + 1]; ++k) {
            const double v = col_val_[k];
            const double* bc = binv_.data() + col_row_[k];
            for (int i = 0; i < m_; ++i) out[i] += v * bc[static_cast<size_t>(i) * m_];
        }
    } else if (col < n_struct_ + m_) {
        const int r = col - n_struct_;
        const double* bc = binv_.data() + r;
        for (int i = 0; i < m_; ++i) out[i] = bc[static_cast<size_t>(i) * m_];
    } else {
        const int r = col - n_struct_ - m_;
        const double s = art_sign_[r];
        const double* bc = binv_.data() + r;
        for (int i = 0; i < m_; ++i) out[i] = s * bc[static_cast<size_t>(i) * m_];
    }
}

void SimplexWorkspace::btran_cost(const std::vector<double>& cost,
                                  std::vector<double>& y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (int k = 0; k < m_; ++k) {
        const double cb = cost[basis_[k]];
        if (cb == 0.0) continue;
        const double* row = binv_.data() + static_cast<size_t>(k) * m_;
        for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
    }
}

void SimplexWorkspace::initial_basis() {
    // structural columns nonbasic at their bound nearest zero
    for (int j = 0; j < n_struct_ + m_; ++j) {
        const double v = nearest_bound_value(lo_[j], hi_[j]);
        xval_[j] = v;
        if (lo_[j] == -kInf && hi_[j] == kInf)
            status_[j] = kNonbasicFree;
        else
            status_[j] = (v == lo_[j]) ? kNonbasicLower : kNonbasicUpper;
    }
    std::vector<double> resid(rhs_scaled_);
    std::vector<std::pair<int, double>> entries;
    for (int j = 0; j < n_struct_; ++j) {
        if (xval_[j] == 0.0) continue;
        column_entries(j, entries);
        for (const auto& [r, v] : entries) resid[r] -= v * xval_[j];
    }
    // crash: a slack absorbs its row's residual whenever its bounds allow;
    // otherwise an artificial carries it into phase 1
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (int i = 0; i < m_; ++i) {
        const int slack = n_struct_ + i;
        const int art = n_struct_ + m_ + i;
        if (resid[i] >= lo_[slack] - 1e-12 && resid[i] <= hi_[slack] + 1e-12) {
            basis_[i] = slack;
            status_[slack] = kBasic;
            xb_[i] = resid[i];
            art_sign_[i] = 1;
            status_[art] = kNonbasicLower;
            xval_[art] = 0.0;
            lo_[art] = hi_[art] = 0.0;  // unused artificial stays pinned
            binv_[static_cast<size_t>(i) * m_ + i] = 1.0;
        } else {
            const double shifted =
                resid[i] - nearest_bound_value(lo_[slack], hi_[slack]);
            art_sign_[i] = shifted >= 0.0 ? 1 : -1;
            basis_[i] = art;
            status_[art] = kBasic;
            xb_[i] = std::abs(shifted);
            binv_[static_cast<size_t>(i) * m_ + i] = art_sign_[i];
        }
    }
}

void SimplexWorkspace::recompute_xb() {
    std::vector<double> resid(rhs_scaled_);
    std::vector<std::pair<int, double>> entries;
    for (int j = 0; j < n_total_; ++j) {
        if (status_[j] == kBasic || xval_[j] == 0.0) continue;
        column_entries(j, entries);
        for (const auto& [r, v] : entries) resid[r] -= v * xval_[j];
    }
    for (int i = 0; i < m_; ++i) {
        const double* row = binv_.data() + static_cast<size_t>(i) * m_;
        double s = 0.0;
        for (int k = 0; k < m_; ++k) s += row[k] * resid[k];
        xb_[i] = s;
    }
}

bool SimplexWorkspace::refactorize() {
    // dense Gauss-Jordan inverse of the basis matrix
    const int m = m_;
    if (m == 0) return true;
    std::vector<double> mat(static_cast<size_t>(m) * m, 0.0);
    std::vector<std::pair<int, double>> entries;
    for (int k = 0; k < m; ++k) {
        column_entries(basis_[k], entries);
        for (const auto& [r, v] : entries) mat[static_cast<size_t>(r) * m + k] = v;
    }
    std::vector<double> inv(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
    std::vector<int> perm(m);
    for (int col = 0; col < m; ++col) {
        int piv = -1;
        double best = 1e-12;
        for (int r = col; r < m; ++r) {
            const double v = std::abs(mat[static_cast<size_t>(r) * m + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (piv < 0) return false;
        if (piv != col) {
            for (int k = 0; k < m; ++k) {
                std::swap(mat[static_cast<size_t>(piv) * m + k],
                          mat[static_cast<size_t>(col) * m + k]);
                std::swap(inv[static_cast<size_t>(piv) * m + k],
                          inv[static_cast<size_t>(col) * m + k]);
            }
        }
        const double d = mat[static_cast<size_t>(col) * m + col];
        const double dinv = 1.0 / d;
        double* mrow = mat.data() + static_cast<size_t>(col) * m;
        double* irow = inv.data() + static_cast<size_t>(col) * m;
        for (int k = 0; k < m; ++k) {
            mrow[k] *= dinv;
            irow[k] *= dinv;
        }
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const double f = mat[static_cast<size_t>(r) * m + col];
            if (f == 0.0) continue;
            double* mr = mat.data() + static_cast<size_t>(r) * m;
            double* ir = inv.data() + static_cast<size_t>(r) * m;
            for (int k = 0; k < m; ++k) {
                mr[k] -= f * mrow[k];
                ir[k] -= f * irow[k];
            }
        }
    }
    binv_.swap(inv);
    std::fill(devex_w_.begin(), devex_w_.end(), 1.0);
    return true;
}

int SimplexWorkspace::price(const std::vector<double>& cost, bool bland,
                            double tol) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < n_total_; ++j) {
        const char st = status_[j];
        if (st == kBasic) continue;
        if (lo_[j] == hi_[j]) continue;  // fixed
        const double d = cost[j] - entry_dot(j, y_);
        bool eligible = false;
        if (st == kNonbasicLower)
            eligible = d > tol;
        else if (st == kNonbasicUpper)
            eligible = d < -tol;
        else
            eligible = std::abs(d) > tol;
        if (!eligible) continue;
        if (bland) return j;
        const double score = d * d / devex_w_[j];
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return best;
}

int SimplexWorkspace::run_simplex(const std::vector<double>& cost, bool phase_one,
                                  const LpOptions& opts, long& iters,
                                  long iter_budget) {
    bool bland = false;
    long stall = 0;
    long updates_since_refactor = 0;
    const long stall_limit = std::max<long>(300, m_);
    std::vector<std::pair<int, double>> entries;
    const bool trace = std::getenv("VRFB_LP_TRACE") != nullptr;

    while (true) {
        if (iters >= iter_budget) return 1;
        ++iters;
        if (trace && iters % 50 == 0) {
            double z = 0;
            for (int i = 0; i < m_; ++i) z += cost[basis_[i]] * xb_[i];
            std::fprintf(stderr, "iter=%ld phase%d z=%.9g stall=%ld bland=%d t=%.2f\n",
                         iters, phase_one ? 1 : 2, z, stall, bland ? 1 : 0,
                         std::chrono::duration<double>(
                             std::chrono::steady_clock::now().time_since_epoch())
                             .count());
        }

        btran_cost(cost, y_);
        const int q = price(cost, bland, opts.opt_tol);
        if (q < 0) return 0;  // phase optimal
        const double dq = cost[q] - entry_dot(q, y_);

        ftran(q, alpha_);

        const int dir = (status_[q] == kNonbasicUpper) ? -1
                        : (status_[q] == kNonbasicFree) ? (dq > 0 ? 1 : -1)
                                                        : 1;
        // ratio test: entering moves by dir*t, basic i moves by -dir*alpha_i*t
        double t_limit = kInf;
        if (lo_[q] > -kInf && hi_[q] < kInf) t_limit = hi_[q] - lo_[q];
        double t_min = t_limit;
        int leave = -1;
        for (int i = 0; i < m_; ++i) {
            const double delta = -dir * alpha_[i];
            if (delta > kPivotTol) {
                const double room = hi_[basis_[i]] - xb_[i];
                if (room == kInf) continue;
                const double t = std::max(0.0, room + kFeasEps) / delta;
                if (t < t_min) {
                    t_min = t;
                    leave = i;
                }
            } else if (delta < -kPivotTol) {
                const double room = xb_[i] - lo_[basis_[i]];
                if (room == kInf) continue;
                const double t = std::max(0.0, room + kFeasEps) / (-delta);
                if (t < t_min) {
                    t_min = t;
                    leave = i;
                }
            }
        }
        if (t_min == kInf) return 2;  // unbounded direction

        if (leave >= 0) {
            // among near-ties prefer the largest pivot (or lowest index with Bland)
            const double cutoff = t_min * (1.0 + 1e-7) + 1e-12;
            double best_piv = std::abs(alpha_[leave]);
            for (int i = 0; i < m_; ++i) {
                const double delta = -dir * alpha_[i];
                double t;
                if (delta > kPivotTol) {
                    const double room = hi_[basis_[i]] - xb_[i];
                    if (room == kInf) continue;
                    t = std::max(0.0, room + kFeasEps) / delta;
                } else if (delta < -kPivotTol) {
                    const double room = xb_[i] - lo_[basis_[i]];
                    if (room == kInf) continue;
                    t = std::max(0.0, room + kFeasEps) / (-delta);
                } else {
                    continue;
                }
                if (t <= cutoff) {
                    if (bland) {
                        if (basis_[i] < basis_[leave]) leave = i;
                    } else if (std::abs(alpha_[i]) > best_piv) {
                        best_piv = std::abs(alpha_[i]);
                        leave = i;
                    }
                }
            }
            t_min = std::max(0.0, t_min);
        }

        // stall bookkeeping for the anti-cycling fallback
        if (t_min * std::abs(dq) <= 1e-13) {
            if (++stall > stall_limit) bland = true;
        } else {
            stall = 0;
        }

        if (leave < 0) {
            // bound flip: entering jumps to its opposite bound
            const double t = t_min;
            for (int i = 0; i < m_; ++i) xb_[i] -= dir * alpha_[i] * t;
            if (status_[q] == kNonbasicLower) {
                status_[q] = kNonbasicUpper;
                xval_[q] = hi_[q];
            } else {
                status_[q] = kNonbasicLower;
                xval_[q] = lo_[q];
            }
            continue;
        }

        // pivot
        const int r = leave;
        const int out_col = basis_[r];
        const double piv = alpha_[r];
        const double t = t_min;
        for (int i = 0; i < m_; ++i) xb_[i] -= dir * alpha_[i] * t;
        const double enter_val = xval_[q] + dir * t;

        const double delta_r = -dir * piv;
        if (delta_r > 0) {
            status_[out_col] = kNonbasicUpper;
            xval_[out_col] = hi_[out_col];
        } else {
            status_[out_col] = kNonbasicLower;
            xval_[out_col] = lo_[out_col];
        }
        basis_[r] = q;
        status_[q] = kBasic;
        xb_[r] = enter_val;

        // binv update: row r scaled, others eliminated
        {
            double* rowr = binv_.data() + static_cast<size_t>(r) * m_;
            const double pinv = 1.0 / piv;
            for (int k = 0; k < m_; ++k) rowr[k] *= pinv;
            for (int i = 0; i < m_; ++i) {
                if (i == r) continue;
                const double f = alpha_[i];
                if (f == 0.0) continue;
                double* rowi = binv_.data() + static_cast<size_t>(i) * m_;
                for (int k = 0; k < m_; ++k) rowi[k] -= f * rowr[k];
            }
        }

        if (opts.use_devex && !bland) {
            // devex reference weights from the updated pivot row
            const double* rowr = binv_.data() + static_cast<size_t>(r) * m_;
            const double wq = std::max(devex_w_[q], 1.0);
            for (int j = 0; j < n_total_; ++j) {
                if (status_[j] == kBasic || lo_[j] == hi_[j]) continue;
                double rho;
                if (j < n_struct_) {
                    rho = 0.0;
                    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
                        rho += col_val_[k] * rowr[col_row_[k]];
                } else if (j < n_struct_ + m_) {
                    rho = rowr[j - n_struct_];
                } else {
                    rho = rowr[j - n_struct_ - m_] * art_sign_[j - n_struct_ - m_];
                }
                const double cand = rho * rho * wq;
                if (cand > devex_w_[j]) devex_w_[j] = cand;
            }
            devex_w_[out_col] = std::max(wq / (piv * piv), 1.0);
        }

        if (++updates_since_refactor >= 400) {
            if (refactorize()) recompute_xb();
            updates_since_refactor = 0;
        }
    }
}

Solution SimplexWorkspace::solve(const LpOptions& opts) {
    return solve_with_bounds(lo_orig_, hi_orig_, opts);
}

Solution SimplexWorkspace::solve_with_bounds(const std::vector<double>& lo,
                                             const std::vector<double>& hi,
                                             const LpOptions& opts) {
    assert(problem_ != nullptr);
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    long iters = 0;
    const long budget = opts.max_iterations > 0
                            ? opts.max_iterations
                            : std::max<long>(20000, 60L * (m_ + n_struct_));

    for (int attempt = 0; attempt < 3; ++attempt) {
        LpOptions local = opts;
        if (attempt > 0) local.use_devex = false;

        reset_bounds(lo, hi);
        for (int j = 0; j < n_struct_; ++j) {
            if (lo_[j] > hi_[j] + 1e-12) {
                sol.status = Status::Infeasible;
                sol.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                sol.iterations = iters;
                return sol;
            }
        }
        initial_basis();

        // phase 1: drive artificial infeasibility to zero
        double art_sum = 0.0;
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= n_struct_ + m_) art_sum += xb_[i];
        if (art_sum > 1e-11) {
            std::fill(work_cost_.begin(), work_cost_.end(), 0.0);
            for (int i = 0; i < m_; ++i) work_cost_[n_struct_ + m_ + i] = -1.0;
            std::fill(devex_w_.begin(), devex_w_.end(), 1.0);
            const int term = run_simplex(work_cost_, true, local, iters, budget);
            if (term == 1 && attempt + 1 < 3) continue;
            double infeas = 0.0;
            for (int i = 0; i < m_; ++i)
                if (basis_[i] >= n_struct_ + m_) infeas += std::max(0.0, xb_[i]);
            if (infeas > 1e-7) {
                sol.status = Status::Infeasible;
                sol.iterations = iters;
                sol.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                return sol;
            }
        }

        // phase 2: real objective, artificials pinned at zero
        for (int i = 0; i < m_; ++i) {
            const int j = n_struct_ + m_ + i;
            lo_[j] = hi_[j] = 0.0;
            if (status_[j] != kBasic) xval_[j] = 0.0;
        }
        std::copy(obj_scaled_.begin(), obj_scaled_.end(), work_cost_.begin());
        std::fill(work_cost_.begin() + n_struct_, work_cost_.end(), 0.0);
        std::fill(devex_w_.begin(), devex_w_.end(), 1.0);
        const int term = run_simplex(work_cost_, false, local, iters, budget);
        if (term == 1 && attempt + 1 < 3) continue;
        if (term == 1) throw std::runtime_error("simplex: iteration limit exceeded");
        if (term == 2) {
            sol.status = Status::Unbounded;
            sol.bound = kInf;
            sol.iterations = iters;
            sol.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            return sol;
        }

        // verify against the original data; on drift, retry cold with Bland
        if (!refactorize()) continue;
        recompute_xb();
        sol = finish(local, iters, term, true);
        if (sol.status == Status::Optimal) break;
    }
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

Solution SimplexWorkspace::finish(const LpOptions& opts, long iters, int /*term*/,
                                  bool /*p1*/) {
    Solution sol;
    sol.iterations = iters;

    // assemble the (unscaled) structural solution
    std::vector<double> x(n_struct_, 0.0);
    for (int j = 0; j < n_struct_; ++j)
        if (status_[j] != kBasic) x[j] = xval_[j] * col_scale_[j];
    for (int i = 0; i < m_; ++i) {
        const int j = basis_[i];
        if (j < n_struct_) x[j] = xb_[i] * col_scale_[j];
    }

    const Problem& p = *problem_;
    double obj = 0.0;
    for (int j = 0; j < n_struct_; ++j) obj += p.objective()[j] * x[j];

    // primal feasibility on the original data
    bool ok = true;
    for (int j = 0; j < n_struct_ && ok; ++j) {
        const double span = std::max(1.0, std::abs(x[j]));
        if (x[j] < lo_[j] * col_scale_[j] - opts.feas_tol * span ||
            x[j] > hi_[j] * col_scale_[j] + opts.feas_tol * span)
            ok = false;
    }
    for (int i = 0; i < p.num_rows() && ok; ++i) {
        double ax = 0.0;
        double mag = 1.0;
        for (const auto& [c, v] : p.row(i)) {
            ax += v * x[c];
            mag = std::max(mag, std::abs(v * x[c]));
        }
        const double b = p.row_rhs(i);
        const double tol = opts.feas_tol * std::max(mag, std::abs(b));
        switch (p.row_sense(i)) {
            case RowSense::LessEqual:
                if (ax > b + tol) ok = false;
                break;
            case RowSense::GreaterEqual:
                if (ax < b - tol) ok = false;
                break;
            case RowSense::Equal:
                if (std::abs(ax - b) > tol) ok = false;
                break;
        }
    }
    if (!ok) {
        sol.status = Status::FeasibleGap;  // forces a retry in the caller loop
        return sol;
    }

    // dual bound from multipliers and reduced costs (scaled space; objective
    // values are scale-invariant)
    btran_cost(work_cost_, y_);
    double bound = 0.0;
    for (int i = 0; i < m_; ++i) bound += y_[i] * rhs_scaled_[i];
    for (int j = 0; j < n_total_; ++j) {
        if (status_[j] == kBasic) continue;
        const double d = work_cost_[j] - entry_dot(j, y_);
        if (std::abs(d) <= opts.opt_tol * 10) continue;
        if (d > 0) {
            if (hi_[j] < kInf)
                bound += d * hi_[j];
            else
                bound += d * xval_[j];
        } else {
            if (lo_[j] > -kInf)
                bound += d * lo_[j];
            else
                bound += d * xval_[j];
        }
    }
    dual_bound_ = std::max(bound, obj);

    sol.status = Status::Optimal;
    sol.x = std::move(x);
    sol.objective = obj;
    sol.bound = dual_bound_;
    sol.gap = 0.0;
    return sol;
}

Solution solve_lp(const Problem& p, const LpOptions& opts) {
    SimplexWorkspace ws;
    ws.setup(p);
    return ws.solve(opts);
}

}  // namespace vrfb::milp
