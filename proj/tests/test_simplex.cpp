// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vrfb/milp/problem.hpp"
#include "vrfb/milp/simplex.hpp"

using namespace vrfb::milp;

TEST_CASE("maximize x subject to x <= 3") {
    Problem p;
    int x = p.add_col(0.0, kInf, 1.0);
    p.add_row({{x, 1.0}}, RowSense::LessEqual, 3.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(3.0));
    CHECK(s.x[x] == doctest::Approx(3.0));
}

TEST_CASE("maximize x+y subject to x+y <= 1") {
    Problem p;
    int x = p.add_col(0.0, kInf, 1.0);
    int y = p.add_col(0.0, kInf, 1.0);
    p.add_row({{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 1.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("equality constraints need phase one") {
    Problem p;
    int x = p.add_col(0.0, 10.0, 2.0);
    int y = p.add_col(0.0, 10.0, 1.0);
    p.add_row({{x, 1.0}, {y, 1.0}}, RowSense::Equal, 4.0);
    p.add_row({{x, 1.0}}, RowSense::LessEqual, 1.5);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(2.0 * 1.5 + 2.5));
    CHECK(s.x[x] == doctest::Approx(1.5));
    CHECK(s.x[y] == doctest::Approx(2.5));
}

TEST_CASE("infeasible system detected") {
    Problem p;
    int x = p.add_col(0.0, 1.0, 1.0);
    p.add_row({{x, 1.0}}, RowSense::GreaterEqual, 2.0);
    auto s = solve_lp(p);
    CHECK(s.status == Status::Infeasible);
}

TEST_CASE("unbounded detected") {
    Problem p;
    int x = p.add_col(0.0, kInf, 1.0);
    int y = p.add_col(0.0, kInf, 0.0);
    p.add_row({{x, 1.0}, {y, -1.0}}, RowSense::LessEqual, 1.0);
    auto s = solve_lp(p);
    CHECK(s.status == Status::Unbounded);
}

TEST_CASE("negative lower bounds and upper-bounded columns") {
    Problem p;
    int x = p.add_col(-5.0, 5.0, -1.0);  // wants to sit at -5
    int y = p.add_col(-2.0, 3.0, 2.0);
    p.add_row({{x, 1.0}, {y, 1.0}}, RowSense::GreaterEqual, -4.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[y] == doctest::Approx(3.0));
    CHECK(s.x[x] == doctest::Approx(-5.0));
    CHECK(s.objective == doctest::Approx(11.0));
}

TEST_CASE("free variables") {
    Problem p;
    int x = p.add_col(-kInf, kInf, 1.0);
    p.add_row({{x, 2.0}}, RowSense::LessEqual, 6.0);
    p.add_row({{x, 1.0}}, RowSense::GreaterEqual, -100.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[x] == doctest::Approx(3.0));
}

TEST_CASE("no rows at all") {
    Problem p;
    int x = p.add_col(-1.0, 2.0, 3.0);
    int y = p.add_col(0.0, 1.0, -1.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[x] == doctest::Approx(2.0));
    CHECK(s.x[y] == doctest::Approx(0.0));
}

TEST_CASE("fixed columns are respected") {
    Problem p;
    int x = p.add_col(2.0, 2.0, 5.0);
    int y = p.add_col(0.0, 10.0, 1.0);
    p.add_row({{x, 1.0}, {y, 1.0}}, RowSense::LessEqual, 6.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.x[x] == doctest::Approx(2.0));
    CHECK(s.x[y] == doctest::Approx(4.0));
}

TEST_CASE("weak duality and feasibility on random dense LPs") {
    std::mt19937_64 rng(42);
    auto uni = [&](double a, double b) {
        return a + (b - a) * ((rng() >> 11) * 0x1.0p-53);
    };
    int feasible_count = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Problem p;
        const int n = 3 + static_cast<int>(rng() % 6);
        const int m = 2 + static_cast<int>(rng() % 6);
        for (int j = 0; j < n; ++j) p.add_col(0.0, uni(0.5, 4.0), uni(-2.0, 2.0));
        for (int i = 0; i < m; ++i) {
            std::vector<std::pair<int, double>> row;
            for (int j = 0; j < n; ++j)
                if (rng() % 3 != 0) row.emplace_back(j, uni(-3.0, 3.0));
            if (row.empty()) row.emplace_back(0, 1.0);
            const auto sense = static_cast<RowSense>(rng() % 3);
            p.add_row(row, sense, uni(-2.0, 4.0));
        }
        auto s = solve_lp(p);
        if (s.status != Status::Optimal) continue;
        ++feasible_count;
        // weak duality
        CHECK(s.objective <= s.bound + 1e-7 * std::max(1.0, std::abs(s.objective)));
        // primal feasibility at 1e-7
        for (int i = 0; i < p.num_rows(); ++i) {
            double ax = 0.0;
            for (auto [c, v] : p.row(i)) ax += v * s.x[c];
            const double b = p.row_rhs(i);
            const double tol = 1e-6 * std::max(1.0, std::abs(b));
            if (p.row_sense(i) == RowSense::LessEqual) CHECK(ax <= b + tol);
            if (p.row_sense(i) == RowSense::GreaterEqual) CHECK(ax >= b - tol);
            if (p.row_sense(i) == RowSense::Equal)
                CHECK(std::abs(ax - b) <= tol);
        }
        for (int j = 0; j < n; ++j) {
            CHECK(s.x[j] >= p.lower()[j] - 1e-7);
            CHECK(s.x[j] <= p.upper()[j] + 1e-7);
        }
    }
    CHECK(feasible_count > 10);
}

TEST_CASE("degenerate LP terminates (Bland fallback)") {
    // classic cycling-prone construction
    Problem p;
    int x1 = p.add_col(0.0, kInf, 10.0);
    int x2 = p.add_col(0.0, kInf, -57.0);
    int x3 = p.add_col(0.0, kInf, -9.0);
    int x4 = p.add_col(0.0, kInf, -24.0);
    p.add_row({{x1, 0.5}, {x2, -5.5}, {x3, -2.5}, {x4, 9.0}}, RowSense::LessEqual, 0.0);
    p.add_row({{x1, 0.5}, {x2, -1.5}, {x3, -0.5}, {x4, 1.0}}, RowSense::LessEqual, 0.0);
    p.add_row({{x1, 1.0}}, RowSense::LessEqual, 1.0);
    auto s = solve_lp(p);
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(1.0));
}
