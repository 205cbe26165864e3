// SPDX-License-Identifier: Apache-2.0
#include "vrfb/hull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace vrfb::hull {

namespace {

struct Vec3 {
    double x = 0, y = 0, z = 0;
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
};

constexpr double kEps = 1e-10;

struct Face {
    int a, b, c;
    Vec3 n;       // outward normal
    double off;   // n . point on face
    bool alive = true;
};

Face make_face(const std::vector<Vec3>& pts, int a, int b, int c,
               const Vec3& interior) {
    Face f{a, b, c, {}, 0.0, true};
    f.n = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
    f.off = f.n.dot(pts[a]);
    if (f.n.dot(interior) > f.off) {  // flip so the normal points outward
        std::swap(f.b, f.c);
        f.n = {-f.n.x, -f.n.y, -f.n.z};
        f.off = -f.off;
    }
    return f;
}

/// Incremental convex hull of a 3-D point cloud. Points on a face (within
/// tolerance) are treated as interior, so coplanar clusters do not spawn
/// degenerate facets. Returns the surviving faces.
std::vector<Face> incremental_hull(const std::vector<Vec3>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw std::invalid_argument("hull: need at least 4 points");

    // initial simplex: spread apart, then non-collinear, then non-coplanar
    int i0 = 0, i1 = -1;
    double best = -1.0;
    for (int i = 1; i < n; ++i) {
        const double d = (pts[i] - pts[i0]).norm();
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    if (best < kEps) throw std::invalid_argument("hull: all points coincide");
    int i2 = -1;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
        const double d = (pts[i1] - pts[i0]).cross(pts[i] - pts[i0]).norm();
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (best < kEps) throw std::invalid_argument("hull: points are collinear");
    Vec3 nrm = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]);
    nrm = {nrm.x / nrm.norm(), nrm.y / nrm.norm(), nrm.z / nrm.norm()};
    int i3 = -1;
    best = kEps;
    for (int i = 0; i < n; ++i) {
        const double d = std::abs(nrm.dot(pts[i] - pts[i0]));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (i3 < 0) throw std::invalid_argument("hull: points are coplanar");

    Vec3 interior{(pts[i0].x + pts[i1].x + pts[i2].x + pts[i3].x) / 4,
                  (pts[i0].y + pts[i1].y + pts[i2].y + pts[i3].y) / 4,
                  (pts[i0].z + pts[i1].z + pts[i2].z + pts[i3].z) / 4};

    std::vector<Face> faces;
    faces.push_back(make_face(pts, i0, i1, i2, interior));
    faces.push_back(make_face(pts, i0, i1, i3, interior));
    faces.push_back(make_face(pts, i0, i2, i3, interior));
    faces.push_back(make_face(pts, i1, i2, i3, interior));

    for (int p = 0; p < n; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        // visible faces
        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
            if (!faces[f].alive) continue;
            const double scale = std::max(1.0, std::abs(faces[f].off));
            if (faces[f].n.dot(pts[p]) - faces[f].off > kEps * scale)
                visible.push_back(f);
        }
        if (visible.empty()) continue;  // inside (or on) the hull
        // horizon: edges shared by exactly one visible face
        std::map<std::pair<int, int>, int> edge_count;
        auto bump = [&](int a, int b) {
            auto key = std::minmax(a, b);
            edge_count[{key.first, key.second}]++;
        };
        for (int f : visible) {
            bump(faces[f].a, faces[f].b);
            bump(faces[f].b, faces[f].c);
            bump(faces[f].c, faces[f].a);
            faces[f].alive = false;
        }
        for (const auto& [edge, cnt] : edge_count) {
            if (cnt != 1) continue;
            faces.push_back(make_face(pts, edge.first, edge.second, p, interior));
        }
    }
    std::vector<Face> out;
    for (auto& f : faces)
        if (f.alive) out.push_back(f);
    return out;
}

bool same_plane(const TangentPlane& a, const TangentPlane& b) {
    return std::abs(a.a_power - b.a_power) <= 1e-9 &&
           std::abs(a.a_soc - b.a_soc) <= 1e-9 &&
           std::abs(a.intercept - b.intercept) <= 1e-9;
}

/// Exact plane through three points, expressed as z = a x + b y + c.
TangentPlane plane_through(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                           Side side) {
    const Vec3 n = (p1 - p0).cross(p2 - p0);
    if (std::abs(n.z) <= kEps * n.norm())
        throw std::invalid_argument("hull: degenerate sample plane is vertical");
    TangentPlane t;
    t.a_power = -n.x / n.z;
    t.a_soc = -n.y / n.z;
    t.intercept = n.dot(p0) / n.z;
    t.side = side;
    return t;
}

}  // namespace

double LinearizedPerformance::charge_envelope(double p, double soc) const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& pl : charge_planes) v = std::min(v, pl.eval(p, soc));
    return v;
}

double LinearizedPerformance::discharge_envelope(double p, double soc) const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& pl : discharge_planes) v = std::max(v, pl.eval(p, soc));
    return v;
}

std::vector<SamplePoint> sample_surface(const curves::EfficiencyDataset& ds,
                                        Side side, int n_int) {
    if (n_int < 2) throw std::invalid_argument("sample_surface: n_int must be >= 2");
    std::vector<SamplePoint> out;
    out.reserve(ds.soc_levels.size() * (n_int + 1));
    for (double soc : ds.soc_levels) {
        for (int k = 1; k <= n_int + 1; ++k) {
            const double p = static_cast<double>(k) / (n_int + 1);
            const double q = side == Side::Charge
                                 ? curves::internal_charge_power(ds, soc, p)
                                 : curves::internal_discharge_power(ds, soc, p);
            out.push_back({p, soc, q});
        }
    }
    return out;
}

LinearizedPerformance build_convex_hull(const std::vector<SamplePoint>& samples,
                                        Side side) {
    if (samples.size() < 3)
        throw std::invalid_argument("build_convex_hull: need at least 3 samples");

    std::vector<Vec3> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) pts.push_back({s.p_ext, s.soc, s.p_int});

    LinearizedPerformance lin;
    if (side == Side::Charge)
        lin.samples_c = samples;
    else
        lin.samples_d = samples;
    auto& planes = side == Side::Charge ? lin.charge_planes : lin.discharge_planes;

    // coplanar cloud: the hull degenerates to that single plane
    {
        int j1 = -1, j2 = -1;
        double best = -1.0;
        for (size_t i = 1; i < pts.size(); ++i) {
            const double d = (pts[i] - pts[0]).norm();
            if (d > best) {
                best = d;
                j1 = static_cast<int>(i);
            }
        }
        best = -1.0;
        for (size_t i = 1; i < pts.size(); ++i) {
            const double d = (pts[j1] - pts[0]).cross(pts[i] - pts[0]).norm();
            if (d > best) {
                best = d;
                j2 = static_cast<int>(i);
            }
        }
        if (best < kEps)
            throw std::invalid_argument(
                "build_convex_hull: fewer than 3 non-collinear samples");
        const TangentPlane cand = plane_through(pts[0], pts[j1], pts[j2], side);
        bool coplanar = true;
        for (const auto& s : samples) {
            if (std::abs(cand.eval(s.p_ext, s.soc) - s.p_int) > 1e-9) {
                coplanar = false;
                break;
            }
        }
        if (coplanar) {
            planes.push_back(cand);
            return lin;
        }
    }

    // close the cloud with its projection onto a far plane so that the wanted
    // envelope is exactly the surviving non-vertical facade
    double zfar;
    if (side == Side::Charge) {
        zfar = samples[0].p_int;
        for (const auto& s : samples) zfar = std::min(zfar, s.p_int);
        zfar -= 1.0;
    } else {
        zfar = samples[0].p_int;
        for (const auto& s : samples) zfar = std::max(zfar, s.p_int);
        zfar += 1.0;
    }
    const size_t base = pts.size();
    for (size_t i = 0; i < base; ++i) pts.push_back({pts[i].x, pts[i].y, zfar});

    const auto faces = incremental_hull(pts);
    for (const auto& f : faces) {
        const double nn = f.n.norm();
        if (side == Side::Charge && f.n.z <= kEps * nn) continue;     // keep roof
        if (side == Side::Discharge && f.n.z >= -kEps * nn) continue; // keep floor
        TangentPlane t;
        t.a_power = -f.n.x / f.n.z;
        t.a_soc = -f.n.y / f.n.z;
        t.intercept = f.off / f.n.z;
        t.side = side;
        bool dup = false;
        for (const auto& existing : planes)
            if (same_plane(existing, t)) {
                dup = true;
                break;
            }
        if (!dup) planes.push_back(t);
    }
    if (planes.empty())
        throw std::logic_error("build_convex_hull: no facets survived");

    // nudge intercepts so every sample is bounded on the right side even
    // after floating-point drift
    for (auto& pl : planes) {
        double worst = 0.0;
        for (const auto& s : samples) {
            const double v = pl.eval(s.p_ext, s.soc);
            if (side == Side::Charge)
                worst = std::max(worst, s.p_int - v);
            else
                worst = std::max(worst, v - s.p_int);
        }
        if (worst > 1e-7)
            throw std::logic_error("build_convex_hull: unsound facet");
        if (worst > 0.0) pl.intercept += side == Side::Charge ? worst : -worst;
    }
    return lin;
}

double compute_delta_p(const LinearizedPerformance& lin, Side side, double soc_lo,
                       double soc_hi) {
    const auto& planes =
        side == Side::Charge ? lin.charge_planes : lin.discharge_planes;
    if (planes.empty()) throw std::invalid_argument("compute_delta_p: planes not built");
    double worst = 0.0;
    for (double soc : {soc_lo, soc_hi}) {
        if (side == Side::Charge) {
            double env = std::numeric_limits<double>::infinity();
            for (const auto& pl : planes) env = std::min(env, pl.eval(0.0, soc));
            worst = std::max(worst, std::max(0.0, -env));
        } else {
            double env = -std::numeric_limits<double>::infinity();
            for (const auto& pl : planes) env = std::max(env, pl.eval(0.0, soc));
            worst = std::max(worst, std::max(0.0, env));
        }
    }
    return worst;
}

LinearizedPerformance linearize(const curves::EfficiencyDataset& ds, int n_int,
                                double soc_lo, double soc_hi) {
    auto lc = build_convex_hull(sample_surface(ds, Side::Charge, n_int),
                                Side::Charge);
    auto ld = build_convex_hull(sample_surface(ds, Side::Discharge, n_int),
                                Side::Discharge);
    LinearizedPerformance lin;
    lin.charge_planes = std::move(lc.charge_planes);
    lin.discharge_planes = std::move(ld.discharge_planes);
    lin.samples_c = std::move(lc.samples_c);
    lin.samples_d = std::move(ld.samples_d);
    lin.n_int = n_int;

    lin.delta_p_charge = compute_delta_p(lin, Side::Charge, soc_lo, soc_hi);
    lin.delta_p_discharge = compute_delta_p(lin, Side::Discharge, soc_lo, soc_hi);
    lin.delta_p = std::max(lin.delta_p_charge, lin.delta_p_discharge);

    for (const auto& s : lin.samples_c)
        lin.max_internal_charge = std::max(lin.max_internal_charge, s.p_int);
    for (const auto& s : lin.samples_d)
        lin.max_internal_discharge = std::max(lin.max_internal_discharge, s.p_int);

    // envelope/p ratio extremes over the operating box; the envelopes are
    // affine in soc so the band endpoints suffice
    double kc = -std::numeric_limits<double>::infinity();
    double kd = std::numeric_limits<double>::infinity();
    for (double soc : {soc_lo, soc_hi}) {
        for (int i = 1; i <= 2000; ++i) {
            const double p = static_cast<double>(i) / 2000.0;
            kc = std::max(kc, lin.charge_envelope(p, soc) / p);
            kd = std::min(kd, lin.discharge_envelope(p, soc) / p);
        }
    }
    lin.max_charge_ratio = kc + 1e-9;
    lin.min_discharge_ratio = std::max(0.0, kd - 1e-9);
    return lin;
}

void dump_planes(const LinearizedPerformance& lin, std::ostream& out) {
    out << "side,a_power,a_soc,intercept\n";
    out.precision(12);
    for (const auto& pl : lin.charge_planes)
        out << "charge," << pl.a_power << ',' << pl.a_soc << ',' << pl.intercept
            << '\n';
    for (const auto& pl : lin.discharge_planes)
        out << "discharge," << pl.a_power << ',' << pl.a_soc << ',' << pl.intercept
            << '\n';
}

}  // namespace vrfb::hull
