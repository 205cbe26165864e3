// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "vrfb/curves.hpp"
#include "vrfb/hull.hpp"
#include "vrfb/milp/branch_bound.hpp"
#include "vrfb/milp/problem.hpp"

namespace vrfb::dayopt {

enum class Maintenance { None, Rebalancing, Servicing };

enum class VariantKind { Detailed, SimpleA, SimpleB };

/// Detailed: tangent-plane efficiency + degradation chain.
/// SimpleA:  tangent-plane efficiency, no degradation.
/// SimpleB:  constant efficiencies, no degradation.
struct ModelVariant {
    VariantKind kind = VariantKind::Detailed;

    bool variable_efficiency() const { return kind != VariantKind::SimpleB; }
    bool degradation_active() const { return kind == VariantKind::Detailed; }
    static const char* name(VariantKind k);
    static VariantKind parse(const std::string& s);
};

/// One day's inputs. Hourly arrays share length T (24 in production; tests
/// clip shorter horizons).
struct DayInstance {
    int day_index = 0;
    std::vector<double> c_s;    // sell price, EUR/kWh
    std::vector<double> c_p;    // purchase price, EUR/kWh
    std::vector<double> p_res;  // renewable production, kW
    std::vector<double> p_dem;  // demand, kW
    double p_g_max = 0.0;       // grid connection limit, kW
    double e_m_prev = 0.0;      // accessible energy at day start, kWh
    double soe_0 = 0.0;         // boundary state of energy, kWh
    Maintenance maintenance = Maintenance::None;
    double tau = 1.0;  // period length, h
    bool allow_grid_purchase = true;

    int hours() const { return static_cast<int>(c_s.size()); }
    void validate() const;
};

/// Column index map: 11 variables per hour, 3 of them binary.
struct DayVariables {
    int T = 0;
    enum Kind {
        kPbc, kPbd, kPcIn, kPdIn, kPgS, kPgP, kSoc, kSoe, kKb, kKonoff, kKid,
        kKindCount
    };
    int idx(Kind k, int hour) const { return static_cast<int>(k) * T + hour; }
    int count() const { return kKindCount * T; }
    static std::string name(Kind k, int hour);
};

struct BuildOptions {
    // adds envelope-derived valid rows (power-ratio links and tight-constant
    // copies of the plane rows); never changes the integer-feasible set
    bool strengthen = true;
};

/// Assemble one day's MILP. Plane coefficients are rescaled from per-unit to
/// kW with p_nom; the big-M rows follow the published form verbatim.
milp::Problem build_day_problem(const DayInstance& inst,
                                const hull::LinearizedPerformance& lin,
                                const curves::BatteryParams& bp,
                                const ModelVariant& v,
                                const BuildOptions& opts = {});

/// Per-hour values of every variable plus the realized day aggregates.
struct DaySchedule {
    int day_index = 0;
    int T = 0;
    std::vector<double> p_bc, p_bd, p_c_in, p_d_in, p_g_s, p_g_p, soc, soe;
    std::vector<int> k_b, k_onoff, k_id;
    std::vector<double> curtailment;  // slack of the power-balance inequality
    double revenue = 0.0;             // Rev(d), EUR
    double n_cyc = 0.0;               // partial charge/discharge cycles
    Maintenance maintenance = Maintenance::None;
    long nodes = 0;
    double gap = 0.0;
    double wall_seconds = 0.0;
};

/// Read a solver solution back into a schedule. Throws when the solution
/// status carries no usable point.
DaySchedule extract_schedule(const DayInstance& inst,
                             const curves::BatteryParams& bp,
                             const milp::Solution& sol);

/// Ground-truth oracle for short horizons (T <= 8): enumerates the per-hour
/// state {idle, charge, discharge} x {sell, buy}, fixes the binaries and
/// solves one LP per combination.
milp::Solution brute_force(const DayInstance& inst,
                           const hull::LinearizedPerformance& lin,
                           const curves::BatteryParams& bp, const ModelVariant& v,
                           const milp::LpOptions& lp_opts = {}, int threads = 1);

/// Rounding heuristic for day problems: reads the hourly battery state off
/// the relaxation's SoE trajectory (fractional markers are unreliable) and
/// the grid state off the larger of the two grid flows.
std::function<std::vector<std::pair<int, char>>(const std::vector<double>&)>
day_rounding_heuristic(const DayInstance& inst);

/// Solver options tuned for a day problem, heuristic wired in.
milp::MilpOptions day_solver_options(const DayInstance& inst,
                                     double gap_tol = 1e-6, double gap_abs = 1e-9,
                                     double time_limit = 120.0);

}  // namespace vrfb::dayopt
