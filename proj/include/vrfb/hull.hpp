// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <vector>

#include "vrfb/curves.hpp"

namespace vrfb::hull {

enum class Side { Charge, Discharge };

/// One linearization sampling point of an internal-power surface,
/// everything in per-unit of rated power.
struct SamplePoint {
    double p_ext = 0.0;  // external battery power
    double soc = 0.0;
    double p_int = 0.0;  // internal power at that point
};

/// plane(p, soc) = a_power * p + a_soc * soc + intercept.
/// Charge planes bound their samples from above, discharge planes from below.
struct TangentPlane {
    double a_power = 0.0;
    double a_soc = 0.0;
    double intercept = 0.0;
    Side side = Side::Charge;

    double eval(double p, double soc) const {
        return a_power * p + a_soc * soc + intercept;
    }
};

/// Tangent-plane sets for both internal-power surfaces plus the derived
/// constants the scheduling model needs.
struct LinearizedPerformance {
    std::vector<TangentPlane> charge_planes;     // J_c planes
    std::vector<TangentPlane> discharge_planes;  // J_d planes
    std::vector<SamplePoint> samples_c;
    std::vector<SamplePoint> samples_d;
    int n_int = 0;
    double delta_p = 0.0;  // worst-case fictitious internal power at p_ext = 0

    // per-side convexification gaps at p_ext = 0 over the SoC band
    double delta_p_charge = 0.0;
    double delta_p_discharge = 0.0;

    // largest sampled internal powers (the model's power caps)
    double max_internal_charge = 0.0;     // max over samples_c of p_int
    double max_internal_discharge = 0.0;  // max over samples_d of p_int

    // extreme internal-per-external power ratios implied by the envelopes
    // over the operating box; valid per-hour links between the power pairs
    double max_charge_ratio = 0.0;
    double min_discharge_ratio = 0.0;

    /// min over charge planes at (p, soc); internal charge power never exceeds it
    double charge_envelope(double p, double soc) const;
    /// max over discharge planes at (p, soc); internal discharge power never
    /// falls below it while discharging
    double discharge_envelope(double p, double soc) const;
};

/// Equally spaced power nodes on (0, 1]: p_k = k / (n_int + 1), k = 1..n_int+1,
/// one set per tabulated SoC level. n_int >= 2 required.
std::vector<SamplePoint> sample_surface(const curves::EfficiencyDataset& ds,
                                        Side side, int n_int);

/// Convex hull of the sample cloud, closed with its projection onto a far
/// plane; keeps the upper facets for the charge side (concave envelope) and
/// the lower facets for the discharge side. Coplanar facets merge; an
/// all-coplanar cloud yields that single plane. Throws when fewer than
/// 3 non-collinear points are given.
LinearizedPerformance build_convex_hull(const std::vector<SamplePoint>& samples,
                                        Side side);

/// Envelope magnitude at p_ext = 0, worst case over the SoC band. The big-M
/// must dominate this value (scaled to kW).
double compute_delta_p(const LinearizedPerformance& lin, Side side,
                       double soc_lo = 0.1, double soc_hi = 0.9);

/// Sample both surfaces, build both hulls and fill in every derived constant.
LinearizedPerformance linearize(const curves::EfficiencyDataset& ds, int n_int,
                                double soc_lo = 0.1, double soc_hi = 0.9);

/// Debug dump: one line per plane, "side,a_power,a_soc,intercept".
void dump_planes(const LinearizedPerformance& lin, std::ostream& out);

}  // namespace vrfb::hull
