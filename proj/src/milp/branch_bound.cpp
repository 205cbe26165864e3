// SPDX-License-Identifier: Apache-2.0
#include "vrfb/milp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <thread>

namespace vrfb::milp {

namespace {

struct Node {
    double bound;  // parent LP objective, valid upper bound for the subtree
    long id;
    std::vector<std::pair<int, char>> fixes;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
        return a.id > b.id;                                // then FIFO
    }
};

bool gap_closed(double bound, double incumbent, const MilpOptions& o) {
    return bound - incumbent <=
           std::max(o.gap_abs, o.gap_tol * std::max(1.0, std::abs(incumbent)));
}

int most_fractional(const std::vector<double>& x, const std::vector<int>& bins,
                    double int_tol) {
    int best = -1;
    double best_score = int_tol;
    for (int j : bins) {
        const double f = x[j] - std::floor(x[j]);
        const double dist = std::min(f, 1.0 - f);
        if (dist > best_score) {
            best_score = dist;
            best = j;
        }
    }
    return best;
}

}  // namespace

Solution solve_milp(const Problem& p, const MilpOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    p.validate();
    std::vector<int> bins;
    for (int j = 0; j < p.num_cols(); ++j)
        if (p.binary_flags()[j]) bins.push_back(j);

    SimplexWorkspace ws;
    ws.setup(p);

    std::vector<double> lo = p.lower(), hi = p.upper();
    auto apply_fixes = [&](const std::vector<std::pair<int, char>>& fixes) {
        std::copy(p.lower().begin(), p.lower().end(), lo.begin());
        std::copy(p.upper().begin(), p.upper().end(), hi.begin());
        for (const auto& [col, v] : fixes) lo[col] = hi[col] = v;
    };

    Solution root = ws.solve_with_bounds(lo, hi, opts.lp);
    long nodes = 1;
    if (root.status == Status::Infeasible || root.status == Status::Unbounded) {
        root.nodes = nodes;
        root.wall_seconds = elapsed();
        return root;
    }

    double incumbent = -kInf;
    std::vector<double> best_x;

    auto try_incumbent = [&](const Solution& s) {
        if (s.status != Status::Optimal) return;
        for (int j : bins) {
            const double f = s.x[j] - std::floor(s.x[j]);
            if (std::min(f, 1.0 - f) > opts.int_tol) return;
        }
        if (s.objective > incumbent) {
            incumbent = s.objective;
            best_x = s.x;
        }
    };

    try_incumbent(root);

    // quick incumbents: fix a rounded assignment and repair with one LP
    auto run_heuristics = [&](const std::vector<double>& x) {
        if (!opts.rounding_heuristic || bins.empty()) return;
        std::vector<std::vector<std::pair<int, char>>> candidates;
        if (opts.custom_rounding) candidates.push_back(opts.custom_rounding(x));
        std::vector<std::pair<int, char>> plain;
        plain.reserve(bins.size());
        for (int j : bins)
            plain.emplace_back(j, static_cast<char>(x[j] >= 0.5 ? 1 : 0));
        candidates.push_back(std::move(plain));
        for (auto& fixes : candidates) {
            for (auto& [col, v] : fixes)  // keep fixes inside the column bounds
                v = static_cast<char>(std::clamp(static_cast<double>(v),
                                                 p.lower()[col], p.upper()[col]));
            apply_fixes(fixes);
            Solution h = ws.solve_with_bounds(lo, hi, opts.lp);
            ++nodes;
            try_incumbent(h);
            if (incumbent > -kInf) break;
        }
    };
    if (incumbent == -kInf) run_heuristics(root.x);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;
    open.push(Node{root.objective, next_id++, {}});

    double final_bound = root.objective;
    bool timed_out = false;

    while (!open.empty()) {
        if (nodes >= opts.max_nodes || elapsed() > opts.time_limit) {
            timed_out = true;
            final_bound = std::max(incumbent, open.top().bound);
            break;
        }
        Node node = open.top();
        open.pop();
        final_bound = std::max(incumbent, node.bound);
        if (opts.on_progress) opts.on_progress(final_bound, incumbent);
        if (incumbent > -kInf && gap_closed(node.bound, incumbent, opts))
            break;  // best-first: nothing left above the tolerance

        apply_fixes(node.fixes);
        Solution rel = ws.solve_with_bounds(lo, hi, opts.lp);
        ++nodes;
        if (rel.status != Status::Optimal) continue;  // infeasible subtree
        if (incumbent == -kInf) run_heuristics(rel.x);  // still need a start
        if (incumbent > -kInf && gap_closed(rel.objective, incumbent, opts)) continue;

        const int branch = most_fractional(rel.x, bins, opts.int_tol);
        if (branch < 0) {
            try_incumbent(rel);
            continue;
        }
        for (char v : {static_cast<char>(0), static_cast<char>(1)}) {
            Node child{rel.objective, next_id++, node.fixes};
            child.fixes.emplace_back(branch, v);
            open.push(child);
        }
    }

    Solution out;
    out.nodes = nodes;
    out.wall_seconds = elapsed();
    if (incumbent == -kInf) {
        if (timed_out)
            throw std::runtime_error(
                "solve_milp: time or node limit reached with no incumbent");
        out.status = Status::Infeasible;
        return out;
    }
    if (open.empty() && !timed_out) final_bound = incumbent;
    out.bound = std::max(final_bound, incumbent);
    out.objective = incumbent;
    out.x = std::move(best_x);
    out.gap = (out.bound - incumbent) / std::max(1.0, std::abs(incumbent));
    out.status = gap_closed(out.bound, incumbent, opts) ? Status::Optimal
                                                        : Status::FeasibleGap;
    return out;
}

namespace {

/// Substitute fixed binaries into the problem: drops the binary columns,
/// folds their contribution into each rhs and removes rows made vacuous by
/// interval arithmetic. Returns false if some row became unsatisfiable.
bool reduce_fixed(const Problem& p, const std::vector<double>& fixed_val,
                  const std::vector<char>& is_fixed, Problem& out,
                  std::vector<int>& keep_cols) {
    keep_cols.clear();
    std::vector<int> remap(p.num_cols(), -1);
    for (int j = 0; j < p.num_cols(); ++j) {
        if (is_fixed[j]) continue;
        remap[j] = static_cast<int>(keep_cols.size());
        keep_cols.push_back(j);
        out.add_col(p.lower()[j], p.upper()[j], p.objective()[j], false,
                    p.col_name(j));
    }
    std::vector<std::pair<int, double>> entries;
    for (int i = 0; i < p.num_rows(); ++i) {
        double rhs = p.row_rhs(i);
        entries.clear();
        double lo_act = 0.0, hi_act = 0.0;
        for (const auto& [c, v] : p.row(i)) {
            if (is_fixed[c]) {
                rhs -= v * fixed_val[c];
                continue;
            }
            entries.emplace_back(remap[c], v);
            const double l = p.lower()[c], h = p.upper()[c];
            const double a = v * l, b = v * h;
            lo_act += std::min(a, b);
            hi_act += std::max(a, b);
        }
        const double slack_tol = 1e-9 * std::max(1.0, std::abs(rhs));
        switch (p.row_sense(i)) {
            case RowSense::LessEqual:
                if (lo_act > rhs + slack_tol) return false;
                if (hi_act <= rhs + slack_tol) continue;  // vacuous
                break;
            case RowSense::GreaterEqual:
                if (hi_act < rhs - slack_tol) return false;
                if (lo_act >= rhs - slack_tol) continue;
                break;
            case RowSense::Equal:
                if (lo_act > rhs + slack_tol || hi_act < rhs - slack_tol) return false;
                if (entries.empty()) continue;
                break;
        }
        if (entries.empty()) continue;
        out.add_row(entries, p.row_sense(i), rhs);
    }
    return true;
}

}  // namespace

Solution brute_force_enumerate(const Problem& p,
                               const std::vector<std::vector<BinaryChoice>>& groups,
                               const LpOptions& opts, int threads) {
    const auto t0 = std::chrono::steady_clock::now();
    p.validate();

    long total = 1;
    for (const auto& g : groups) {
        if (g.empty()) throw std::invalid_argument("empty choice group");
        total *= static_cast<long>(g.size());
    }

    struct Best {
        double obj = -kInf;
        long combo = -1;
        std::vector<double> x;  // reduced-space solution
        std::vector<int> keep_cols;
        std::vector<double> fixed_val;
    };

    // binaries already pinned by their bounds count as fixed constants
    std::vector<double> base_val(p.num_cols(), 0.0);
    std::vector<char> base_fixed(p.num_cols(), 0);
    for (int j = 0; j < p.num_cols(); ++j) {
        if (p.binary_flags()[j] && p.lower()[j] == p.upper()[j]) {
            base_fixed[j] = 1;
            base_val[j] = p.lower()[j];
        }
    }

    auto run_range = [&](long begin, long end, Best& best) {
        std::vector<double> fixed_val(p.num_cols(), 0.0);
        std::vector<char> is_fixed(p.num_cols(), 0);
        std::vector<int> keep_cols;
        for (long combo = begin; combo < end; ++combo) {
            std::copy(base_fixed.begin(), base_fixed.end(), is_fixed.begin());
            std::copy(base_val.begin(), base_val.end(), fixed_val.begin());
            long rem = combo;
            for (const auto& g : groups) {
                const auto& choice = g[rem % static_cast<long>(g.size())];
                rem /= static_cast<long>(g.size());
                for (const auto& [col, val] : choice.fixes) {
                    fixed_val[col] = val;
                    is_fixed[col] = 1;
                }
            }
            for (int j = 0; j < p.num_cols(); ++j)
                if (p.binary_flags()[j] && !is_fixed[j])
                    throw std::logic_error("brute force: binary not covered by groups");

            Problem reduced;
            keep_cols.clear();
            if (!reduce_fixed(p, fixed_val, is_fixed, reduced, keep_cols)) continue;
            Solution s = solve_lp(reduced, opts);
            if (s.status != Status::Optimal) continue;
            double obj = s.objective;
            for (int j = 0; j < p.num_cols(); ++j)
                if (is_fixed[j]) obj += p.objective()[j] * fixed_val[j];
            if (obj > best.obj || (obj == best.obj && combo < best.combo)) {
                best.obj = obj;
                best.combo = combo;
                best.x = s.x;
                best.keep_cols = keep_cols;
                best.fixed_val = fixed_val;
            }
        }
    };

    const int nthreads = std::max(1, threads);
    std::vector<Best> results(nthreads);
    if (nthreads == 1 || total < 64) {
        run_range(0, total, results[0]);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (total + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const long b = t * chunk, e = std::min(total, (t + 1) * chunk);
            if (b >= e) break;
            pool.emplace_back([&, b, e, t] { run_range(b, e, results[t]); });
        }
        for (auto& th : pool) th.join();
    }

    Best best;
    for (const auto& r : results) {
        if (r.combo < 0) continue;
        if (best.combo < 0 || r.obj > best.obj ||
            (r.obj == best.obj && r.combo < best.combo))
            best = r;
    }

    Solution out;
    out.nodes = total;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (best.combo < 0) {
        out.status = Status::Infeasible;
        return out;
    }
    out.status = Status::Optimal;
    out.objective = best.obj;
    out.bound = best.obj;
    out.x.assign(p.num_cols(), 0.0);
    for (int j = 0; j < p.num_cols(); ++j)
        if (best.fixed_val.size() && p.binary_flags()[j]) out.x[j] = best.fixed_val[j];
    for (size_t k = 0; k < best.keep_cols.size(); ++k)
        out.x[best.keep_cols[k]] = best.x[k];
    return out;
}

}  // namespace vrfb::milp
