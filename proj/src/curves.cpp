// SPDX-License-Identifier: Apache-2.0
#include "vrfb/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vrfb::curves {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool strictly_increasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) return false;
    return true;
}

// linear interpolation index: returns k with grid[k] <= x <= grid[k+1],
// x already clamped into [grid.front(), grid.back()]
size_t bracket(const std::vector<double>& grid, double x) {
    auto it = std::upper_bound(grid.begin(), grid.end(), x);
    size_t hi = static_cast<size_t>(it - grid.begin());
    if (hi == 0) return 0;
    if (hi >= grid.size()) return grid.size() - 2;
    return hi - 1;
}

double interp_surface(const EfficiencyDataset& ds,
                      const std::vector<std::vector<double>>& table, double soc,
                      double p_pu) {
    const double s = std::clamp(soc, ds.soc_levels.front(), ds.soc_levels.back());
    const double p = std::clamp(p_pu, ds.power_grid.front(), ds.power_grid.back());
    const size_t si = bracket(ds.soc_levels, s);
    const size_t pi = bracket(ds.power_grid, p);
    const double s0 = ds.soc_levels[si], s1 = ds.soc_levels[si + 1];
    const double p0 = ds.power_grid[pi], p1 = ds.power_grid[pi + 1];
    const double ws = (s - s0) / (s1 - s0);
    const double wp = (p - p0) / (p1 - p0);
    const double a = table[si][pi] * (1 - wp) + table[si][pi + 1] * wp;
    const double b = table[si + 1][pi] * (1 - wp) + table[si + 1][pi + 1] * wp;
    return a * (1 - ws) + b * ws;
}

// bundled table: (soc, p_pu, eta_c, eta_d), soc-major, grid-sorted
constexpr double kDefaultTable[][4] = {
    {0.20, 0.083333333333, 0.546869696970, 0.567003530090},
    {0.20, 0.166666666667, 0.699608815427, 0.673257906486},
    {0.20, 0.250000000000, 0.748347933884, 0.712772422118},
    {0.20, 0.333333333333, 0.771087052342, 0.730124300816},
    {0.20, 0.416666666667, 0.783426170799, 0.737524451335},
    {0.20, 0.500000000000, 0.790565289256, 0.739675224996},
    {0.20, 0.583333333333, 0.794732979142, 0.738769512283},
    {0.20, 0.666666666667, 0.797043526171, 0.735965361500},
    {0.20, 0.750000000000, 0.798115977961, 0.731930261414},
    {0.20, 0.833333333333, 0.798321763085, 0.727074698748},
    {0.20, 0.916666666667, 0.797897245179, 0.721663957581},
    {0.20, 1.000000000000, 0.797000000000, 0.715876289347},
    {0.50, 0.083333333333, 0.438869696970, 0.603989671910},
    {0.50, 0.166666666667, 0.645608815427, 0.698658275722},
    {0.50, 0.250000000000, 0.712347933884, 0.731543692216},
    {0.50, 0.333333333333, 0.744087052342, 0.744806945372},
    {0.50, 0.416666666667, 0.761826170799, 0.749463805587},
    {0.50, 0.500000000000, 0.772565289256, 0.749656263979},
    {0.50, 0.583333333333, 0.779304407713, 0.747287210117},
    {0.50, 0.666666666667, 0.783543526171, 0.743350948923},
    {0.50, 0.750000000000, 0.786115977961, 0.738415888626},
    {0.50, 0.833333333333, 0.787521763085, 0.732829171478},
    {0.50, 0.916666666667, 0.788079063361, 0.726813743996},
    {0.50, 1.000000000000, 0.788000000000, 0.720518508392},
    {0.80, 0.083333333333, 0.330869696970, 0.646137813004},
    {0.80, 0.166666666667, 0.591608815427, 0.726050375300},
    {0.80, 0.250000000000, 0.676347933884, 0.751330408989},
    {0.80, 0.333333333333, 0.717087052342, 0.760092238794},
    {0.80, 0.416666666667, 0.740226170799, 0.761796079099},
    {0.80, 0.500000000000, 0.754565289256, 0.759910351977},
    {0.80, 0.583333333333, 0.763875836285, 0.756003609754},
    {0.80, 0.666666666667, 0.770043526171, 0.750886271223},
    {0.80, 0.750000000000, 0.774115977961, 0.745017481575},
    {0.80, 0.833333333333, 0.776721763085, 0.738675459065},
    {0.80, 0.916666666667, 0.778260881543, 0.732037556301},
    {0.80, 1.000000000000, 0.779000000000, 0.725221326891},
};

EfficiencyDataset build_from_rows(const std::vector<std::array<double, 4>>& rows) {
    EfficiencyDataset ds;
    for (const auto& r : rows) {
        if (ds.soc_levels.empty() || r[0] != ds.soc_levels.back())
            ds.soc_levels.push_back(r[0]);
    }
    const size_t ns = ds.soc_levels.size();
    require(ns > 0 && rows.size() % ns == 0,
            "dataset rows do not form a full (soc x power) grid");
    const size_t np = rows.size() / ns;
    for (size_t k = 0; k < np; ++k) ds.power_grid.push_back(rows[k][1]);
    ds.eta_c.assign(ns, std::vector<double>(np));
    ds.eta_d.assign(ns, std::vector<double>(np));
    for (size_t si = 0; si < ns; ++si)
        for (size_t pi = 0; pi < np; ++pi) {
            const auto& r = rows[si * np + pi];
            require(r[0] == ds.soc_levels[si] && r[1] == ds.power_grid[pi],
                    "dataset rows not sorted by (soc, p_pu) over a full grid");
            ds.eta_c[si][pi] = r[2];
            ds.eta_d[si][pi] = r[3];
        }
    ds.validate();
    return ds;
}

}  // namespace

void EfficiencyDataset::validate() const {
    require(soc_levels.size() >= 3, "need at least 3 SoC levels");
    require(power_grid.size() >= 4, "need at least 4 power points");
    require(strictly_increasing(soc_levels), "soc levels not strictly increasing");
    require(strictly_increasing(power_grid), "power grid not strictly increasing");
    require(power_grid.front() > 0.0 && power_grid.back() <= 1.0,
            "power grid must lie in (0, 1]");
    require(eta_c.size() == soc_levels.size() && eta_d.size() == soc_levels.size(),
            "efficiency matrix row count mismatch");
    for (const auto* tab : {&eta_c, &eta_d})
        for (const auto& row : *tab) {
            require(row.size() == power_grid.size(),
                    "efficiency matrix column count mismatch");
            for (double e : row)
                require(e > 0.0 && e <= 1.0, "efficiency outside (0, 1]");
        }
    require(p_min_discharge >= 0.0 && p_min_discharge < 1.0,
            "invalid p_min_discharge");
}

BatteryParams BatteryParams::make(double p_nom, double e_nom) {
    BatteryParams bp;
    bp.p_nom = p_nom;
    bp.e_nom = e_nom;
    bp.big_m = 1.5 * p_nom;
    bp.i_reb = rebalancing_duration_hours(p_nom, e_nom);
    bp.validate();
    return bp;
}

void BatteryParams::validate() const {
    require(p_nom > 0 && e_nom > 0, "battery ratings must be positive");
    require(0.0 <= soc_min && soc_min < soc_0 && soc_0 < soc_max && soc_max <= 1.0,
            "need 0 <= soc_min < soc_0 < soc_max <= 1");
    require(cap_lim > 0.0 && cap_lim < 1.0, "cap_lim must be inside (0, 1)");
    require(r_ed < r_fade, "electrolyte decay rate must be below the total fade rate");
    require(r_ed >= 0.0, "fade rates must be nonnegative");
    require(big_m > 0.0, "big_m must be positive");
    require(i_reb == rebalancing_duration_hours(p_nom, e_nom),
            "i_reb inconsistent with 1.5 * E/P rounded up");
    require(eta_c_bar > 0 && eta_c_bar <= 1 && eta_c_star > 0 && eta_c_star <= 1 &&
                eta_d_star > 0 && eta_d_star <= 1,
            "efficiencies must lie in (0, 1]");
}

int rebalancing_duration_hours(double p_nom, double e_nom) {
    require(p_nom > 0 && e_nom > 0, "battery ratings must be positive");
    const int h = static_cast<int>(std::ceil(1.5 * e_nom / p_nom - 1e-9));
    require(h < 24, "rebalancing longer than a day is unsupported");
    return std::max(h, 1);
}

EfficiencyDataset load_dataset(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "empty dataset");
    std::vector<std::array<double, 4>> rows;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::array<double, 4> r{};
        if (!(ls >> r[0] >> r[1] >> r[2] >> r[3]))
            throw std::invalid_argument("dataset: bad row at line " +
                                        std::to_string(lineno));
        rows.push_back(r);
    }
    require(!rows.empty(), "dataset has no rows");
    return build_from_rows(rows);
}

EfficiencyDataset load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dataset file: " + path);
    return load_dataset(in);
}

void save_dataset(const EfficiencyDataset& ds, std::ostream& out) {
    out << "soc,p_pu,eta_c,eta_d\n";
    out << std::fixed << std::setprecision(12);
    for (size_t si = 0; si < ds.soc_levels.size(); ++si)
        for (size_t pi = 0; pi < ds.power_grid.size(); ++pi)
            out << ds.soc_levels[si] << ',' << ds.power_grid[pi] << ','
                << ds.eta_c[si][pi] << ',' << ds.eta_d[si][pi] << '\n';
}

const EfficiencyDataset& bundled_dataset() {
    static const EfficiencyDataset ds = [] {
        std::vector<std::array<double, 4>> rows;
        for (const auto& r : kDefaultTable)
            rows.push_back({r[0], r[1], r[2], r[3]});
        return build_from_rows(rows);
    }();
    return ds;
}

double eta_charge(const EfficiencyDataset& ds, double soc, double p_pu) {
    if (!(p_pu > 0.0) || p_pu > 1.0)
        throw std::domain_error("eta_charge requires 0 < p_pu <= 1");
    return interp_surface(ds, ds.eta_c, soc, p_pu);
}

double eta_discharge(const EfficiencyDataset& ds, double soc, double p_pu) {
    if (!(p_pu > 0.0) || p_pu > 1.0)
        throw std::domain_error("eta_discharge requires 0 < p_pu <= 1");
    return interp_surface(ds, ds.eta_d, soc, p_pu);
}

double internal_charge_power(const EfficiencyDataset& ds, double soc, double p_pu) {
    if (p_pu < 0.0 || p_pu > 1.0)
        throw std::domain_error("internal_charge_power requires 0 <= p_pu <= 1");
    if (p_pu == 0.0) return 0.0;
    return eta_charge(ds, soc, p_pu) * p_pu;
}

double internal_discharge_power(const EfficiencyDataset& ds, double soc,
                                double p_pu) {
    if (p_pu < 0.0 || p_pu > 1.0)
        throw std::domain_error("internal_discharge_power requires 0 <= p_pu <= 1");
    if (p_pu < ds.p_min_discharge) return 0.0;
    return p_pu / eta_discharge(ds, soc, p_pu);
}

}  // namespace vrfb::curves
