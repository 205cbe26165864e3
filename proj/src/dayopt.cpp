// SPDX-License-Identifier: Apache-2.0
#include "vrfb/dayopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vrfb::dayopt {

using milp::Problem;
using milp::RowSense;

const char* ModelVariant::name(VariantKind k) {
    switch (k) {
        case VariantKind::Detailed: return "detailed";
        case VariantKind::SimpleA: return "simple_a";
        case VariantKind::SimpleB: return "simple_b";
    }
    return "?";
}

VariantKind ModelVariant::parse(const std::string& s) {
    if (s == "detailed") return VariantKind::Detailed;
    if (s == "simple_a") return VariantKind::SimpleA;
    if (s == "simple_b") return VariantKind::SimpleB;
    throw std::invalid_argument("unknown model variant: " + s);
}

void DayInstance::validate() const {
    const size_t T = c_s.size();
    if (T == 0) throw std::invalid_argument("day instance: empty horizon");
    if (c_p.size() != T || p_res.size() != T || p_dem.size() != T)
        throw std::invalid_argument("day instance: inconsistent array lengths");
    for (size_t i = 0; i < T; ++i) {
        if (c_s[i] < 0 || c_p[i] < 0)
            throw std::invalid_argument("day instance: negative price");
        if (p_res[i] < 0 || p_dem[i] < 0)
            throw std::invalid_argument("day instance: negative power input");
    }
    if (!(e_m_prev > 0)) throw std::invalid_argument("day instance: e_m_prev <= 0");
    if (soe_0 < 0) throw std::invalid_argument("day instance: negative soe_0");
    if (p_g_max < 0) throw std::invalid_argument("day instance: negative p_g_max");
    if (tau <= 0) throw std::invalid_argument("day instance: tau must be positive");
}

std::string DayVariables::name(Kind k, int hour) {
    static const char* base[] = {"Pbc",  "Pbd", "Pcin", "Pdin", "Pgs", "Pgp",
                                 "SoC",  "SoE", "kb",   "kon",  "kid"};
    return std::string(base[static_cast<int>(k)]) + "_" + std::to_string(hour);
}

Problem build_day_problem(const DayInstance& inst,
                          const hull::LinearizedPerformance& lin,
                          const curves::BatteryParams& bp, const ModelVariant& v,
                          const BuildOptions& opts) {
    inst.validate();
    bp.validate();
    const int T = inst.hours();
    const double pn = bp.p_nom;
    const double bm = bp.big_m;
    const double tau = inst.tau;
    const double maxqc = lin.max_internal_charge * pn;
    const double maxqd = lin.max_internal_discharge * pn;

    if (v.variable_efficiency()) {
        if (lin.charge_planes.empty() || lin.discharge_planes.empty())
            throw std::invalid_argument("build_day_problem: planes not built");
        if (bm < lin.delta_p * pn)
            throw std::invalid_argument(
                "build_day_problem: big_m below the convexification gap");
    }
    const bool reb = inst.maintenance == Maintenance::Rebalancing;
    if (reb && bp.i_reb > T)
        throw std::invalid_argument("build_day_problem: rebalancing exceeds horizon");

    DayVariables vars{T};
    Problem p;

    // columns, block per kind (order matches DayVariables::Kind)
    for (int i = 0; i < T; ++i) p.add_col(0.0, pn, 0.0, false, DayVariables::name(DayVariables::kPbc, i));
    for (int i = 0; i < T; ++i) {
        const bool blocked = reb && i < bp.i_reb;  // no discharge while rebalancing
        p.add_col(0.0, blocked ? 0.0 : pn, 0.0, false,
                  DayVariables::name(DayVariables::kPbd, i));
    }
    for (int i = 0; i < T; ++i)
        p.add_col(-maxqc, maxqc, 0.0, false, DayVariables::name(DayVariables::kPcIn, i));
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, maxqd, 0.0, false, DayVariables::name(DayVariables::kPdIn, i));
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, inst.p_g_max, tau * inst.c_s[i], false,
                  DayVariables::name(DayVariables::kPgS, i));
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, inst.allow_grid_purchase ? inst.p_g_max : 0.0,
                  -tau * inst.c_p[i], false, DayVariables::name(DayVariables::kPgP, i));
    for (int i = 0; i < T; ++i) {
        const bool pin = reb && i == bp.i_reb - 1;  // SoC(i_reb) = soc_max
        p.add_col(pin ? bp.soc_max : bp.soc_min, bp.soc_max, 0.0, false,
                  DayVariables::name(DayVariables::kSoc, i));
    }
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, inst.e_m_prev, 0.0, false,
                  DayVariables::name(DayVariables::kSoe, i));
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, 1.0, 0.0, true, DayVariables::name(DayVariables::kKb, i));
    for (int i = 0; i < T; ++i) {
        // the constant-efficiency variant has no convexification gap to mask:
        // the on/off marker collapses to "on"
        const double lo = v.variable_efficiency() ? 0.0 : 1.0;
        p.add_col(lo, 1.0, 0.0, true, DayVariables::name(DayVariables::kKonoff, i));
    }
    for (int i = 0; i < T; ++i)
        p.add_col(0.0, 1.0, 0.0, true, DayVariables::name(DayVariables::kKid, i));

    auto id = [&](DayVariables::Kind k, int i) { return vars.idx(k, i); };

    for (int i = 0; i < T; ++i) {
        const int pbc = id(DayVariables::kPbc, i), pbd = id(DayVariables::kPbd, i);
        const int pcin = id(DayVariables::kPcIn, i), pdin = id(DayVariables::kPdIn, i);
        const int pgs = id(DayVariables::kPgS, i), pgp = id(DayVariables::kPgP, i);
        const int soc = id(DayVariables::kSoc, i), soe = id(DayVariables::kSoe, i);
        const int kb = id(DayVariables::kKb, i), kon = id(DayVariables::kKonoff, i);
        const int kid = id(DayVariables::kKid, i);

        // curtailment balance (inequality form)
        p.add_row({{pbc, -1.0}, {pbd, 1.0}, {pgs, -1.0}, {pgp, 1.0}},
                  RowSense::GreaterEqual, inst.p_dem[i] - inst.p_res[i]);

        // grid exclusivity
        p.add_row({{pgp, 1.0}, {kid, -inst.p_g_max}}, RowSense::LessEqual, 0.0);
        p.add_row({{pgs, 1.0}, {kid, inst.p_g_max}}, RowSense::LessEqual,
                  inst.p_g_max);

        // battery charge/discharge exclusivity
        p.add_row({{pbc, 1.0}, {kb, -pn}}, RowSense::LessEqual, 0.0);
        p.add_row({{pbd, 1.0}, {kb, pn}}, RowSense::LessEqual, pn);
        p.add_row({{pcin, 1.0}, {kb, maxqc}}, RowSense::GreaterEqual, 0.0);
        p.add_row({{pcin, 1.0}, {kb, -maxqc}}, RowSense::LessEqual, 0.0);
        p.add_row({{pdin, 1.0}, {kb, maxqd}}, RowSense::LessEqual, maxqd);

        // on/off gating
        p.add_row({{pbc, 1.0}, {kon, -pn}}, RowSense::LessEqual, 0.0);
        p.add_row({{pbd, 1.0}, {kon, -pn}}, RowSense::LessEqual, 0.0);
        p.add_row({{pcin, 1.0}, {kon, -maxqc}}, RowSense::LessEqual, 0.0);
        p.add_row({{pdin, 1.0}, {kon, -maxqd}}, RowSense::LessEqual, 0.0);

        // SoC definition on the accessible energy of the previous day
        if (i == 0)
            p.add_row({{soc, 2.0 * inst.e_m_prev}, {soe, -1.0}}, RowSense::Equal,
                      inst.soe_0);
        else
            p.add_row({{soc, 2.0 * inst.e_m_prev},
                       {soe, -1.0},
                       {id(DayVariables::kSoe, i - 1), -1.0}},
                      RowSense::Equal, 0.0);

        // SoE recursion
        if (i == 0)
            p.add_row({{soe, 1.0}, {pcin, -tau}, {pdin, tau}}, RowSense::Equal,
                      inst.soe_0);
        else
            p.add_row({{soe, 1.0},
                       {id(DayVariables::kSoe, i - 1), -1.0},
                       {pcin, -tau},
                       {pdin, tau}},
                      RowSense::Equal, 0.0);

        if (v.variable_efficiency()) {
            // tangent planes, coefficients rescaled to kW, big-M deactivation
            for (const auto& pl : lin.charge_planes) {
                p.add_row({{pcin, 1.0},
                           {pbc, -pl.a_power},
                           {soc, -pl.a_soc * pn},
                           {kb, bm},
                           {kon, bm}},
                          RowSense::LessEqual, pl.intercept * pn + 2.0 * bm);
            }
            for (const auto& pl : lin.discharge_planes) {
                p.add_row({{pdin, 1.0},
                           {pbd, -pl.a_power},
                           {soc, -pl.a_soc * pn},
                           {kb, bm},
                           {kon, -bm}},
                          RowSense::GreaterEqual, pl.intercept * pn - bm);
            }
            if (opts.strengthen) {
                // envelope-implied power-ratio links keep the relaxation honest
                p.add_row({{pcin, 1.0}, {pbc, -lin.max_charge_ratio}},
                          RowSense::LessEqual, 0.0);
                p.add_row({{pdin, 1.0}, {pbd, -lin.min_discharge_ratio}},
                          RowSense::GreaterEqual, 0.0);
                // plane rows again with the smallest deactivation constants
                for (const auto& pl : lin.charge_planes) {
                    const double v_lo = pl.eval(0.0, bp.soc_min) * pn;
                    const double v_hi = pl.eval(0.0, bp.soc_max) * pn;
                    const double sig = std::max(0.0, -std::min(v_lo, v_hi));
                    p.add_row({{pcin, 1.0},
                               {pbc, -pl.a_power},
                               {soc, -pl.a_soc * pn},
                               {kb, sig},
                               {kon, sig}},
                              RowSense::LessEqual, pl.intercept * pn + 2.0 * sig);
                }
                for (const auto& pl : lin.discharge_planes) {
                    const double v_lo = pl.eval(0.0, bp.soc_min) * pn;
                    const double v_hi = pl.eval(0.0, bp.soc_max) * pn;
                    const double sig = std::max(0.0, std::max(v_lo, v_hi));
                    p.add_row({{pdin, 1.0},
                               {pbd, -pl.a_power},
                               {soc, -pl.a_soc * pn},
                               {kb, sig},
                               {kon, -sig}},
                              RowSense::GreaterEqual, pl.intercept * pn - sig);
                }
            }
        } else {
            // constant efficiencies: equalities replace every plane row
            p.add_row({{pcin, 1.0}, {pbc, -bp.eta_c_star}}, RowSense::Equal, 0.0);
            p.add_row({{pdin, 1.0}, {pbd, -1.0 / bp.eta_d_star}}, RowSense::Equal,
                      0.0);
        }
    }

    // daily boundary: SoE(T) back at the rated-energy anchor
    p.add_row({{id(DayVariables::kSoe, T - 1), 1.0}}, RowSense::Equal, inst.soe_0);

    return p;
}

DaySchedule extract_schedule(const DayInstance& inst,
                             const curves::BatteryParams& bp,
                             const milp::Solution& sol) {
    if (!sol.has_solution())
        throw std::runtime_error("extract_schedule: solver returned no usable point");
    const int T = inst.hours();
    DayVariables vars{T};
    if (static_cast<int>(sol.x.size()) != vars.count())
        throw std::runtime_error("extract_schedule: solution size mismatch");

    DaySchedule s;
    s.day_index = inst.day_index;
    s.T = T;
    s.maintenance = inst.maintenance;
    auto grab = [&](DayVariables::Kind k) {
        std::vector<double> v(T);
        for (int i = 0; i < T; ++i) v[i] = sol.x[vars.idx(k, i)];
        return v;
    };
    s.p_bc = grab(DayVariables::kPbc);
    s.p_bd = grab(DayVariables::kPbd);
    s.p_c_in = grab(DayVariables::kPcIn);
    s.p_d_in = grab(DayVariables::kPdIn);
    s.p_g_s = grab(DayVariables::kPgS);
    s.p_g_p = grab(DayVariables::kPgP);
    s.soc = grab(DayVariables::kSoc);
    s.soe = grab(DayVariables::kSoe);
    for (int i = 0; i < T; ++i) {
        s.k_b.push_back(sol.x[vars.idx(DayVariables::kKb, i)] >= 0.5 ? 1 : 0);
        s.k_onoff.push_back(sol.x[vars.idx(DayVariables::kKonoff, i)] >= 0.5 ? 1 : 0);
        s.k_id.push_back(sol.x[vars.idx(DayVariables::kKid, i)] >= 0.5 ? 1 : 0);
    }
    s.curtailment.resize(T);
    double rev = 0.0, charged = 0.0;
    for (int i = 0; i < T; ++i) {
        s.curtailment[i] = inst.p_res[i] - (s.p_bc[i] - s.p_bd[i]) - s.p_g_s[i] +
                           s.p_g_p[i] - inst.p_dem[i];
        rev += inst.tau * (inst.c_s[i] * s.p_g_s[i] - inst.c_p[i] * s.p_g_p[i]);
        charged += inst.tau * s.p_c_in[i];
    }
    s.revenue = rev;
    s.n_cyc = charged / bp.e_nom;
    s.nodes = sol.nodes;
    s.gap = sol.gap;
    s.wall_seconds = sol.wall_seconds;
    return s;
}

std::function<std::vector<std::pair<int, char>>(const std::vector<double>&)>
day_rounding_heuristic(const DayInstance& inst) {
    const int T = inst.hours();
    const double eps_e = 1e-7 * inst.e_m_prev;
    return [T, eps_e, soe_0 = inst.soe_0](const std::vector<double>& x) {
        DayVariables vars{T};
        std::vector<std::pair<int, char>> fixes;
        fixes.reserve(3 * T);
        double prev = soe_0;
        for (int i = 0; i < T; ++i) {
            const double soe = x[vars.idx(DayVariables::kSoe, i)];
            const double d = soe - prev;
            prev = soe;
            char kb = 0, kon = 0;
            if (d > eps_e) {
                kb = 1;
                kon = 1;
            } else if (d < -eps_e) {
                kon = 1;
            }
            const double buy = x[vars.idx(DayVariables::kPgP, i)];
            const double sell = x[vars.idx(DayVariables::kPgS, i)];
            fixes.emplace_back(vars.idx(DayVariables::kKb, i), kb);
            fixes.emplace_back(vars.idx(DayVariables::kKonoff, i), kon);
            fixes.emplace_back(vars.idx(DayVariables::kKid, i),
                               static_cast<char>(buy > sell ? 1 : 0));
        }
        return fixes;
    };
}

milp::MilpOptions day_solver_options(const DayInstance& inst, double gap_tol,
                                     double gap_abs, double time_limit) {
    milp::MilpOptions opts;
    opts.gap_tol = gap_tol;
    opts.gap_abs = gap_abs;
    opts.time_limit = time_limit;
    opts.custom_rounding = day_rounding_heuristic(inst);
    return opts;
}

milp::Solution brute_force(const DayInstance& inst,
                           const hull::LinearizedPerformance& lin,
                           const curves::BatteryParams& bp, const ModelVariant& v,
                           const milp::LpOptions& lp_opts, int threads) {
    const int T = inst.hours();
    if (T > 8)
        throw std::invalid_argument("brute_force: horizon longer than 8 hours");
    Problem p = build_day_problem(inst, lin, bp, v);
    DayVariables vars{T};

    std::vector<std::vector<milp::BinaryChoice>> groups;
    for (int i = 0; i < T; ++i) {
        const int kb = vars.idx(DayVariables::kKb, i);
        const int kon = vars.idx(DayVariables::kKonoff, i);
        const int kid = vars.idx(DayVariables::kKid, i);
        std::vector<std::pair<double, double>> battery;  // (k_b, k_onoff)
        if (v.variable_efficiency()) {
            battery = {{0.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};  // idle, charge, discharge
        } else {
            battery = {{0.0, 1.0}, {1.0, 1.0}};  // k_onoff pinned to on
        }
        std::vector<milp::BinaryChoice> g;
        for (const auto& [b, on] : battery)
            for (double grid : {0.0, 1.0})
                g.push_back({{{kb, b}, {kon, on}, {kid, grid}}});
        groups.push_back(std::move(g));
    }
    return milp::brute_force_enumerate(p, groups, lp_opts, threads);
}

}  // namespace vrfb::dayopt
