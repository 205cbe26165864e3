// SPDX-License-Identifier: Apache-2.0
// Micro-benchmark for one-day solves; prints LP/node statistics so
// formulation changes can be compared quickly.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "vrfb/curves.hpp"
#include "vrfb/dayopt.hpp"
#include "vrfb/hull.hpp"
#include "vrfb/milp/branch_bound.hpp"
#include "vrfb/milp/simplex.hpp"

using namespace vrfb;
using namespace vrfb::dayopt;

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const int days = argc > 1 ? std::atoi(argv[1]) : 4;
    const auto& ds = curves::bundled_dataset();
    auto lin = hull::linearize(ds, 5);
    auto bp = curves::BatteryParams::make(2500.0, 10000.0);

    std::mt19937_64 rng(1234);
    auto uni = [&](double a, double b) {
        return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
    };

    for (bool strengthen : {true, false}) {
        double tot_ms = 0, tot_nodes = 0, tot_iters = 0, worst_ms = 0;
        double tot_rootgap = 0;
        for (int d = 0; d < days; ++d) {
            DayInstance inst;
            const int T = 24;
            for (int i = 0; i < T; ++i) {
                const double peak =
                    0.05 + 0.03 * std::sin(2 * M_PI * (i - 8) / 24.0) +
                    (i >= 19 && i <= 21 ? 0.04 : 0.0) + uni(-0.004, 0.004);
                inst.c_s.push_back(std::max(0.0, peak));
                inst.c_p.push_back(0.0);
                inst.p_res.push_back(
                    std::max(0.0, 10000.0 * uni(0.1, 0.8)));
                inst.p_dem.push_back(0.0);
            }
            inst.p_g_max = 20000.0;
            inst.e_m_prev = bp.e_nom * (1.0 - 0.02 * d);
            inst.soe_0 = bp.soc_0 * bp.e_nom;
            inst.allow_grid_purchase = false;
            if (d == days - 1) inst.maintenance = Maintenance::Rebalancing;

            auto p = build_day_problem(inst, lin, bp, {VariantKind::Detailed},
                                       {strengthen});
            std::printf("  day %d: building done, rows=%d...\n", d, p.num_rows());
            auto t0 = std::chrono::steady_clock::now();
            auto lpres = milp::solve_lp(p);
            auto t1 = std::chrono::steady_clock::now();
            auto opts = day_solver_options(inst, 1e-6, 1e-3 * 1.0, 600.0);
            auto sol = milp::solve_milp(p, opts);
            auto t2 = std::chrono::steady_clock::now();
            const double lp_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();
            const double ms =
                std::chrono::duration<double, std::milli>(t2 - t1).count();
            const double rootgap =
                (lpres.objective - sol.objective) /
                std::max(1.0, std::abs(sol.objective));
            std::printf(
                "  day %d: rows=%d LP %.0f ms (%ld it, obj %.1f)  MILP %.0f ms "
                "(%ld nodes, obj %.2f, gap %.2e, status %d) rootgap %.3e\n",
                d, p.num_rows(), lp_ms, lpres.iterations, lpres.objective, ms,
                sol.nodes, sol.objective, sol.gap, static_cast<int>(sol.status),
                rootgap);
            tot_ms += ms;
            worst_ms = std::max(worst_ms, ms);
            tot_nodes += sol.nodes;
            tot_iters += lpres.iterations;
            tot_rootgap += rootgap;
        }
        std::printf(
            "strengthen=%d: avg MILP %.0f ms, worst %.0f ms, avg nodes %.1f, "
            "avg LP iters %.0f, avg rootgap %.3e\n\n",
            strengthen, tot_ms / days, worst_ms, tot_nodes / days,
            tot_iters / days, tot_rootgap / days);
    }
    return 0;
}
