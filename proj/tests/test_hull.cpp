// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "vrfb/curves.hpp"
#include "vrfb/hull.hpp"

using namespace vrfb;
using namespace vrfb::hull;

TEST_CASE("sampling counts and node placement") {
    const auto& ds = curves::bundled_dataset();
    auto s5 = sample_surface(ds, Side::Charge, 5);
    CHECK(s5.size() == 18);  // 3 * (5+1)
    auto s2 = sample_surface(ds, Side::Discharge, 2);
    CHECK(s2.size() == 9);
    CHECK_THROWS(sample_surface(ds, Side::Charge, 1));

    // nodes are k/(n_int+1) on (0, 1]
    CHECK(s5[0].p_ext == doctest::Approx(1.0 / 6));
    CHECK(s5[5].p_ext == doctest::Approx(1.0));
    // sampled internal power matches the direct evaluation
    for (const auto& s : s5)
        CHECK(s.p_int ==
              doctest::Approx(curves::internal_charge_power(ds, s.soc, s.p_ext))
                  .epsilon(1e-15));
    for (const auto& s : sample_surface(ds, Side::Discharge, 5))
        CHECK(s.p_int ==
              doctest::Approx(curves::internal_discharge_power(ds, s.soc, s.p_ext))
                  .epsilon(1e-15));
}

TEST_CASE("hull of a planar cloud returns exactly that plane") {
    std::vector<SamplePoint> samples;
    for (double p : {0.2, 0.5, 0.8, 1.0})
        for (double s : {0.2, 0.5, 0.8})
            samples.push_back({p, s, 2.0 * p + 0.1 * s});
    auto lin = build_convex_hull(samples, Side::Charge);
    REQUIRE(lin.charge_planes.size() == 1);
    CHECK(lin.charge_planes[0].a_power == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(lin.charge_planes[0].a_soc == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(lin.charge_planes[0].intercept == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("collinear samples are rejected") {
    std::vector<SamplePoint> samples = {
        {0.1, 0.2, 0.1}, {0.2, 0.2, 0.2}, {0.3, 0.2, 0.3}, {0.4, 0.2, 0.4}};
    CHECK_THROWS(build_convex_hull(samples, Side::Charge));
    CHECK_THROWS(build_convex_hull({{0.1, 0.2, 0.1}, {0.2, 0.2, 0.2}},
                                   Side::Charge));
}

TEST_CASE("bundled dataset: soundness and tightness of both envelopes") {
    const auto& ds = curves::bundled_dataset();
    auto lin = linearize(ds, 5);

    // soundness: every sample bounded the right way
    for (const auto& s : lin.samples_c)
        CHECK(lin.charge_envelope(s.p_ext, s.soc) >= s.p_int - 1e-9);
    for (const auto& s : lin.samples_d)
        CHECK(lin.discharge_envelope(s.p_ext, s.soc) <= s.p_int + 1e-9);

    // tightness: each retained plane supports at least 3 samples
    for (const auto& pl : lin.charge_planes) {
        int touched = 0;
        for (const auto& s : lin.samples_c)
            if (std::abs(pl.eval(s.p_ext, s.soc) - s.p_int) <= 1e-9) ++touched;
        CHECK(touched >= 3);
    }
    for (const auto& pl : lin.discharge_planes) {
        int touched = 0;
        for (const auto& s : lin.samples_d)
            if (std::abs(pl.eval(s.p_ext, s.soc) - s.p_int) <= 1e-9) ++touched;
        CHECK(touched >= 3);
    }

    // the gap at zero power exists on both sides
    CHECK(lin.delta_p_charge > 0.0);
    CHECK(lin.delta_p_discharge > 0.0);
    CHECK(lin.delta_p ==
          doctest::Approx(std::max(lin.delta_p_charge, lin.delta_p_discharge)));
}

TEST_CASE("bundled dataset hull matches the independently computed geometry") {
    // reference values from an independent computational-geometry package
    auto lin = linearize(curves::bundled_dataset(), 5);
    CHECK(lin.charge_planes.size() == 5);
    CHECK(lin.discharge_planes.size() == 5);
    for (const auto& pl : lin.charge_planes)
        CHECK(pl.a_soc == doctest::Approx(-0.03).epsilon(1e-6));
    CHECK(lin.delta_p_charge == doctest::Approx(0.044826).epsilon(1e-3));
    CHECK(lin.delta_p_discharge == doctest::Approx(0.041562).epsilon(1e-3));
    CHECK(lin.max_internal_charge == doctest::Approx(0.797).epsilon(1e-6));
    CHECK(lin.max_internal_discharge == doctest::Approx(1.3968894).epsilon(1e-4));
    CHECK(lin.max_charge_ratio == doctest::Approx(0.8019213).epsilon(1e-4));
    CHECK(lin.min_discharge_ratio == doctest::Approx(1.3066298).epsilon(1e-4));
}

TEST_CASE("delta_p worst case sits at soc_max for charge, soc_min for discharge") {
    auto lin = linearize(curves::bundled_dataset(), 5);
    const double c_hi = compute_delta_p(lin, Side::Charge, 0.9, 0.9);
    const double c_lo = compute_delta_p(lin, Side::Charge, 0.1, 0.1);
    CHECK(c_hi > c_lo);
    CHECK(compute_delta_p(lin, Side::Charge) == doctest::Approx(c_hi));
    const double d_lo = compute_delta_p(lin, Side::Discharge, 0.1, 0.1);
    const double d_hi = compute_delta_p(lin, Side::Discharge, 0.9, 0.9);
    CHECK(d_lo > d_hi);
    CHECK(compute_delta_p(lin, Side::Discharge) == doctest::Approx(d_lo));
}

TEST_CASE("zero-intercept plane set has zero gap") {
    std::vector<SamplePoint> samples;
    for (double p : {0.2, 0.5, 0.8, 1.0})
        for (double s : {0.2, 0.5, 0.8}) samples.push_back({p, s, 0.7 * p});
    auto lin = build_convex_hull(samples, Side::Charge);
    CHECK(compute_delta_p(lin, Side::Charge) == doctest::Approx(0.0));
}

TEST_CASE("big-M default dominates the convexification gap") {
    auto lin = linearize(curves::bundled_dataset(), 5);
    for (double p_nom : {20.0, 45.0, 2500.0}) {
        auto bp = curves::BatteryParams::make(p_nom, 4.0 * p_nom);
        CHECK(bp.big_m >= lin.delta_p * p_nom);
    }
}

TEST_CASE("plane count independent checks across n_int") {
    const auto& ds = curves::bundled_dataset();
    for (int n : {2, 3, 5, 8}) {
        auto lin = linearize(ds, n);
        CHECK(lin.charge_planes.size() >= 2);
        CHECK(lin.discharge_planes.size() >= 2);
        for (const auto& s : lin.samples_c)
            CHECK(lin.charge_envelope(s.p_ext, s.soc) >= s.p_int - 1e-9);
        for (const auto& s : lin.samples_d)
            CHECK(lin.discharge_envelope(s.p_ext, s.soc) <= s.p_int + 1e-9);
    }
}

TEST_CASE("plane dump format") {
    auto lin = linearize(curves::bundled_dataset(), 5);
    std::ostringstream out;
    dump_planes(lin, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "side,a_power,a_soc,intercept");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(lin.charge_planes.size() +
                                   lin.discharge_planes.size()));
}
