// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vrfb/curves.hpp"
#include "vrfb/dayopt.hpp"
#include "vrfb/hull.hpp"
#include "vrfb/milp/branch_bound.hpp"
#include "vrfb/milp/simplex.hpp"

using namespace vrfb;
using namespace vrfb::dayopt;

namespace {

const hull::LinearizedPerformance& lin5() {
    static const auto lin = hull::linearize(curves::bundled_dataset(), 5);
    return lin;
}

DayInstance flat_day(int T, double price, double res_kw, double dem_kw,
                     const curves::BatteryParams& bp) {
    DayInstance d;
    d.c_s.assign(T, price);
    d.c_p.assign(T, 0.0);
    d.p_res.assign(T, res_kw);
    d.p_dem.assign(T, dem_kw);
    d.p_g_max = 2.0 * std::max(res_kw, 1.0);
    d.e_m_prev = bp.e_nom;
    d.soe_0 = bp.soc_0 * bp.e_nom;
    d.allow_grid_purchase = false;
    return d;
}

}  // namespace

TEST_CASE("structural counts: 11T variables, 3T binaries") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(24, 0.1, 10.0, 0.0, bp);
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
    CHECK(p.num_cols() == 264);
    CHECK(p.num_binaries() == 72);

    auto p1 = build_day_problem(flat_day(1, 0.1, 10.0, 0.0, bp), lin5(), bp,
                                {VariantKind::Detailed});
    CHECK(p1.num_cols() == 11);
    CHECK(p1.num_binaries() == 3);
}

TEST_CASE("linearization adds exactly one binary beyond k_b, for any n_int") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(6, 0.1, 10.0, 0.0, bp);
    for (int n_int : {2, 5, 8}) {
        auto lin = hull::linearize(curves::bundled_dataset(), n_int);
        auto p = build_day_problem(d, lin, bp, {VariantKind::Detailed});
        // battery-side binaries per hour: the intrinsic k_b plus k_onoff only
        CHECK(p.num_binaries() == 3 * d.hours());  // k_b + k_onoff + k_id
    }
}

TEST_CASE("nothing to trade: zero prices and powers give zero objective") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(24, 0.0, 0.0, 0.0, bp);
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
    milp::MilpOptions opts;
    opts.gap_abs = 1e-7;
    auto sol = milp::solve_milp(p, opts);
    REQUIRE(sol.status == milp::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(0.0).epsilon(1e-9));
    auto sched = extract_schedule(d, bp, sol);
    CHECK(sched.revenue == doctest::Approx(0.0));
    CHECK(sched.n_cyc == doctest::Approx(0.0).epsilon(1e-9));
    for (int i = 0; i < 24; ++i) {
        CHECK(sched.p_bc[i] == doctest::Approx(0.0).epsilon(1e-7));
        CHECK(sched.p_g_s[i] == doctest::Approx(0.0).epsilon(1e-7));
    }
}

TEST_CASE("single-hour toy: direct sale only") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(1, 1.0, bp.p_nom, 0.0, bp);
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
    auto sol = milp::solve_milp(p);
    REQUIRE(sol.status == milp::Status::Optimal);
    CHECK(sol.objective == doctest::Approx(bp.p_nom).epsilon(1e-7));
}

TEST_CASE("LP relaxation bounds the day MILP") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    DayInstance d = flat_day(4, 0.1, 10.0, 0.0, bp);
    d.c_s = {0.02, 0.05, 0.30, 0.10};
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
    auto lp = milp::solve_lp(p);
    auto mi = milp::solve_milp(p);
    REQUIRE(lp.status == milp::Status::Optimal);
    REQUIRE(mi.status == milp::Status::Optimal);
    CHECK(lp.objective >= mi.objective - 1e-7);
}

TEST_CASE("strengthening rows never change the integer optimum") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    std::mt19937_64 rng(11);
    auto uni = [&](double a, double b) {
        return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 8; ++trial) {
        const int T = 4;
        DayInstance d = flat_day(T, 0.1, 0.0, 0.0, bp);
        for (int i = 0; i < T; ++i) {
            d.c_s[i] = uni(0.0, 0.4);
            d.p_res[i] = uni(0.0, 3.0 * bp.p_nom);
        }
        d.p_g_max = 6.0 * bp.p_nom;
        auto p_plain =
            build_day_problem(d, lin5(), bp, {VariantKind::Detailed}, {false});
        auto p_strong =
            build_day_problem(d, lin5(), bp, {VariantKind::Detailed}, {true});
        milp::MilpOptions opts;
        opts.gap_tol = 1e-8;
        opts.gap_abs = 1e-8;
        auto a = milp::solve_milp(p_plain, opts);
        auto b = milp::solve_milp(p_strong, opts);
        REQUIRE(a.status == milp::Status::Optimal);
        REQUIRE(b.status == milp::Status::Optimal);
        CHECK(a.objective ==
              doctest::Approx(b.objective).epsilon(1e-6));
    }
}

TEST_CASE("schedule invariants on solved days") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    std::mt19937_64 rng(21);
    auto uni = [&](double a, double b) {
        return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 4; ++trial) {
        const int T = 24;
        DayInstance d = flat_day(T, 0.1, 0.0, 0.0, bp);
        for (int i = 0; i < T; ++i) {
            d.c_s[i] = 0.02 + 0.2 * std::pow(std::sin(0.26 * (i + 3 * trial)), 2) +
                       uni(0.0, 0.01);
            d.p_res[i] = uni(0.0, 2.0 * bp.p_nom);
        }
        d.p_g_max = 4.0 * bp.p_nom;
        auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
        milp::MilpOptions opts;
        opts.gap_tol = 1e-6;
        opts.gap_abs = 1e-4;
        auto sol = milp::solve_milp(p, opts);
        REQUIRE(sol.status == milp::Status::Optimal);
        auto s = extract_schedule(d, bp, sol);

        double sum_in = 0, sum_out = 0;
        for (int i = 0; i < T; ++i) {
            CHECK(s.p_bc[i] * s.p_bd[i] == doctest::Approx(0.0).epsilon(1e-6));
            CHECK(s.p_g_s[i] * s.p_g_p[i] == doctest::Approx(0.0).epsilon(1e-6));
            CHECK(s.soc[i] >= bp.soc_min - 1e-7);
            CHECK(s.soc[i] <= bp.soc_max + 1e-7);
            CHECK(s.curtailment[i] >= -1e-6);
            if (s.k_onoff[i] == 0) {
                CHECK(std::abs(s.p_bc[i]) <= 1e-6);
                CHECK(std::abs(s.p_bd[i]) <= 1e-6);
                CHECK(std::abs(s.p_c_in[i]) <= 1e-6);
                CHECK(std::abs(s.p_d_in[i]) <= 1e-6);
            }
            sum_in += s.p_c_in[i];
            sum_out += s.p_d_in[i];
            // active battery sits on the envelope (internal power maximised /
            // minimised by optimality)
            if (s.p_bc[i] > 1e-4 * bp.p_nom) {
                const double env =
                    lin5().charge_envelope(s.p_bc[i] / bp.p_nom, s.soc[i]) * bp.p_nom;
                const double cap = lin5().max_internal_charge * bp.p_nom;
                CHECK(s.p_c_in[i] ==
                      doctest::Approx(std::min(env, cap)).epsilon(1e-5));
            }
            if (s.p_bd[i] > 1e-4 * bp.p_nom) {
                const double env =
                    lin5().discharge_envelope(s.p_bd[i] / bp.p_nom, s.soc[i]) *
                    bp.p_nom;
                CHECK(s.p_d_in[i] >= env - 1e-5 * bp.p_nom);
            }
        }
        CHECK(std::abs(sum_in - sum_out) <= 1e-6 * bp.e_nom);
    }
}

TEST_CASE("constant-efficiency variant uses the fixed conversion rates") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    DayInstance d = flat_day(6, 0.1, 0.0, 0.0, bp);
    d.c_s = {0.01, 0.02, 0.35, 0.01, 0.30, 0.02};
    d.p_res = {2 * bp.p_nom, 2 * bp.p_nom, 0.0, 2 * bp.p_nom, 0.0, 0.0};
    d.p_g_max = 4 * bp.p_nom;
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::SimpleB});
    auto sol = milp::solve_milp(p);
    REQUIRE(sol.status == milp::Status::Optimal);
    auto s = extract_schedule(d, bp, sol);
    for (int i = 0; i < 6; ++i) {
        CHECK(s.p_c_in[i] ==
              doctest::Approx(bp.eta_c_star * s.p_bc[i]).epsilon(1e-6));
        CHECK(s.p_d_in[i] ==
              doctest::Approx(s.p_bd[i] / bp.eta_d_star).epsilon(1e-6));
        CHECK(s.k_onoff[i] == 1);  // pinned on in this variant
    }
    CHECK(sol.objective > 0.0);
}

TEST_CASE("rebalancing day: full recharge, no discharge through i_reb") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);  // i_reb = 6
    DayInstance d = flat_day(24, 0.05, 0.0, 0.0, bp);
    for (int i = 0; i < 24; ++i) {
        d.p_res[i] = 1.5 * bp.p_nom;
        d.c_s[i] = 0.02 + 0.01 * ((i % 7) - 3) / 3.0 + (i >= 16 ? 0.25 : 0.0);
    }
    d.maintenance = Maintenance::Rebalancing;
    d.e_m_prev = 0.82 * bp.e_nom;
    auto p = build_day_problem(d, lin5(), bp, {VariantKind::Detailed});
    milp::MilpOptions opts;
    opts.gap_abs = 1e-3;
    auto sol = milp::solve_milp(p, opts);
    REQUIRE(sol.status == milp::Status::Optimal);
    auto s = extract_schedule(d, bp, sol);
    CHECK(s.soc[bp.i_reb - 1] == doctest::Approx(bp.soc_max).epsilon(1e-7));
    for (int i = 0; i < bp.i_reb; ++i)
        CHECK(s.p_bd[i] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("day oracle: solver equals brute force on short horizons") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    std::mt19937_64 rng(31);
    auto uni = [&](double a, double b) {
        return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 6; ++trial) {
        const int T = 4;
        DayInstance d = flat_day(T, 0.1, 0.0, 0.0, bp);
        for (int i = 0; i < T; ++i) {
            d.c_s[i] = uni(0.0, 0.4);
            d.c_p[i] = uni(0.0, 0.2);
            d.p_res[i] = uni(0.0, 2.5 * bp.p_nom);
            d.p_dem[i] = uni(0.0, 1.0 * bp.p_nom);
        }
        d.allow_grid_purchase = true;
        d.p_g_max = 5.0 * bp.p_nom;
        auto variant = trial % 2 ? VariantKind::SimpleB : VariantKind::Detailed;
        auto p = build_day_problem(d, lin5(), bp, {variant});
        milp::MilpOptions opts;
        opts.gap_tol = 1e-8;
        opts.gap_abs = 1e-8;
        auto bb = milp::solve_milp(p, opts);
        auto bf = dayopt::brute_force(d, lin5(), bp, {variant}, {}, 2);
        REQUIRE(bb.status == milp::Status::Optimal);
        REQUIRE(bf.status == milp::Status::Optimal);
        CHECK(std::abs(bb.objective - bf.objective) <=
              1e-6 * std::max(1.0, std::abs(bf.objective)));
    }
}

TEST_CASE("brute force rejects horizons beyond 8 hours") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(9, 0.1, 10.0, 0.0, bp);
    CHECK_THROWS(dayopt::brute_force(d, lin5(), bp, {VariantKind::Detailed}));
}

TEST_CASE("instance validation") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(4, 0.1, 10.0, 0.0, bp);
    SUBCASE("length mismatch") {
        d.c_p.pop_back();
        CHECK_THROWS(build_day_problem(d, lin5(), bp, {VariantKind::Detailed}));
    }
    SUBCASE("negative price") {
        d.c_s[1] = -0.1;
        CHECK_THROWS(d.validate());
    }
    SUBCASE("zero accessible energy") {
        d.e_m_prev = 0.0;
        CHECK_THROWS(d.validate());
    }
}

TEST_CASE("extract_schedule refuses infeasible results") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(2, 0.1, 10.0, 0.0, bp);
    milp::Solution bad;
    bad.status = milp::Status::Infeasible;
    CHECK_THROWS(extract_schedule(d, bp, bad));
}

TEST_CASE("cycle counting definition") {
    auto bp = curves::BatteryParams::make(20.0, 80.0);
    auto d = flat_day(2, 0.0, 0.0, 0.0, bp);
    DayVariables vars{2};
    milp::Solution sol;
    sol.status = milp::Status::Optimal;
    sol.x.assign(vars.count(), 0.0);
    // a day that charges exactly e_nom of internal energy -> one cycle
    sol.x[vars.idx(DayVariables::kPcIn, 0)] = bp.e_nom / 2;
    sol.x[vars.idx(DayVariables::kPcIn, 1)] = bp.e_nom / 2;
    auto s = extract_schedule(d, bp, sol);
    CHECK(s.n_cyc == doctest::Approx(1.0));
}
