// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vrfb::curves {

/// Sampled charge/discharge efficiency surfaces over (power p.u., SoC).
///
/// Efficiencies cover the whole conversion chain: cell stack, shunt
/// currents, pumps and inverter. The surfaces are tabulated on a power
/// grid in per-unit of rated power, one row per SoC level.
struct EfficiencyDataset {
    std::vector<double> soc_levels;          // strictly increasing fractions
    std::vector<double> power_grid;          // strictly increasing, in (0, 1]
    std::vector<std::vector<double>> eta_c;  // [soc][power]
    std::vector<std::vector<double>> eta_d;  // [soc][power]
    double p_min_discharge = 0.03;   // below this, discharging internal power is 0
    double p_concavity_charge = 0.1; // charge internal power is concave above this

    void validate() const;  // throws std::invalid_argument on violations
};

/// Battery ratings, operating band, degradation rates and model constants.
struct BatteryParams {
    double p_nom = 0.0;   // rated power, kW
    double e_nom = 0.0;   // rated energy, kWh
    double soc_min = 0.10;
    double soc_max = 0.90;
    double soc_0 = 0.30;  // daily boundary state of charge
    double cap_lim = 0.80;     // lower capacity fraction triggering maintenance
    double r_fade = 0.00442;   // total fade per cycle (fraction)
    double r_ed = 0.00055;     // electrolyte-decay fade per cycle (fraction)
    double big_m = 0.0;        // constraint-deactivation constant, kW
    int i_reb = 0;             // rebalancing duration, whole hours
    double eta_c_bar = 0.797;  // mean charging efficiency for rebalancing cost
    double eta_c_star = 0.759; // constant charge efficiency for the simple model
    double eta_d_star = 0.735; // constant discharge efficiency for the simple model

    /// Fills big_m (1.5 * p_nom) and i_reb from the ratings.
    static BatteryParams make(double p_nom, double e_nom);

    void validate() const;
};

/// Rebalancing duration: 1.5 * E/P rounded up to whole hours.
/// Throws std::invalid_argument when the result reaches 24 h.
int rebalancing_duration_hours(double p_nom, double e_nom);

/// Parse a delimited dataset (header soc,p_pu,eta_c,eta_d; rows sorted by
/// (soc, p_pu)) and validate it.
EfficiencyDataset load_dataset(std::istream& in);
EfficiencyDataset load_dataset_file(const std::string& path);

/// Write a dataset in the same delimited layout load_dataset reads.
void save_dataset(const EfficiencyDataset& ds, std::ostream& out);

/// The bundled synthetic dataset. Shaped like measured VRFB surfaces (sharp
/// efficiency collapse at low power, mild SoC dependence) and calibrated so
/// that eta_c(0.20, 1.0) = 0.797 and the envelope means are 0.759 / 0.735.
const EfficiencyDataset& bundled_dataset();

/// Bilinear interpolation of the charging efficiency. SoC outside the
/// tabulated band clamps to the nearest level; requires 0 < p_pu <= 1.
double eta_charge(const EfficiencyDataset& ds, double soc, double p_pu);
double eta_discharge(const EfficiencyDataset& ds, double soc, double p_pu);

/// eta_c(soc, p) * p, and 0 at p = 0.
double internal_charge_power(const EfficiencyDataset& ds, double soc, double p_pu);

/// p / eta_d(soc, p) for p >= p_min_discharge, else 0.
double internal_discharge_power(const EfficiencyDataset& ds, double soc, double p_pu);

}  // namespace vrfb::curves
