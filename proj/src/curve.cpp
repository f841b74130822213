#include "hopfflow/curve.hpp"

#include <algorithm>
#include <cmath>

#include "fourier.hpp"

namespace hopfflow {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline int wrap(int m, int n) {
    m %= n;
    return m < 0 ? m + n : m;
}

ScalarField stencil_derivative(const ScalarField& f, int order, double h) {
    const int n = static_cast<int>(f.size());
    ScalarField d(n);
    auto at = [&](int m) { return f[wrap(m, n)]; };
    switch (order) {
        case 1:
            for (int m = 0; m < n; ++m)
                d[m] = (at(m - 2) - 8 * at(m - 1) + 8 * at(m + 1) - at(m + 2)) / (12 * h);
            break;
        case 2:
            for (int m = 0; m < n; ++m)
                d[m] = (-at(m - 2) + 16 * at(m - 1) - 30 * at(m) + 16 * at(m + 1) - at(m + 2)) /
                       (12 * h * h);
            break;
        case 3:
            for (int m = 0; m < n; ++m)
                d[m] = (at(m - 3) - 8 * at(m - 2) + 13 * at(m - 1) - 13 * at(m + 1) +
                        8 * at(m + 2) - at(m + 3)) /
                       (8 * h * h * h);
            break;
        case 4:
            for (int m = 0; m < n; ++m)
                d[m] = (-at(m - 3) + 12 * at(m - 2) - 39 * at(m - 1) + 56 * at(m) -
                        39 * at(m + 1) + 12 * at(m + 2) - at(m + 3)) /
                       (6 * h * h * h * h);
            break;
        default:
            throw Error("differentiate: order must be in 1..4");
    }
    return d;
}

void check_size(std::size_t n, int order) {
    if (order < 1 || order > 4) throw Error("differentiate: order must be in 1..4");
    if (n < 16) throw TooCoarse("differentiate: need at least 16 nodes");
}

}  // namespace

DiscreteCurve DiscreteCurve::from_nodes(NodeField nodes, int orientation) {
    if (nodes.size() < 3) throw DegenerateCurve("curve needs at least 3 nodes");
    DiscreteCurve c;
    // Validate only; nodes are stored bit-exactly so snapshots round-trip.
    for (const auto& p : nodes)
        if (std::abs(p.norm() - 1.0) > 1e-9) throw NonUnitInput("curve node not on S^2");
    const int n = static_cast<int>(nodes.size());
    double min_chord = std::numeric_limits<double>::max();
    double max_chord = 0.0;
    for (int m = 0; m < n; ++m) {
        const double chord = (nodes[(m + 1) % n] - nodes[m]).norm();
        min_chord = std::min(min_chord, chord);
        max_chord = std::max(max_chord, chord);
    }
    if (min_chord < 1e-14) throw DegenerateCurve("coincident adjacent nodes");
    c.nodes = std::move(nodes);
    c.orientation = orientation;
    c.quasi_uniform_warning = (max_chord / min_chord >= kChordRatioWarn);
    return c;
}

DiscreteCurve DiscreteCurve::reversed() const {
    DiscreteCurve r;
    const int n = static_cast<int>(nodes.size());
    r.nodes.resize(n);
    for (int m = 0; m < n; ++m) r.nodes[m] = nodes[wrap(-m, n)];
    r.orientation = -orientation;
    r.quasi_uniform_warning = quasi_uniform_warning;
    return r;
}

ScalarField differentiate(const ScalarField& values, int order, DerivScheme scheme) {
    check_size(values.size(), order);
    if (scheme == DerivScheme::Spectral) return detail::spectral_derivative(values, order);
    const double h = kTwoPi / static_cast<double>(values.size());
    return stencil_derivative(values, order, h);
}

NodeField differentiate(const NodeField& values, int order, DerivScheme scheme) {
    check_size(values.size(), order);
    const int n = static_cast<int>(values.size());
    ScalarField cx(n), cy(n), cz(n);
    for (int m = 0; m < n; ++m) {
        cx[m] = values[m].x;
        cy[m] = values[m].y;
        cz[m] = values[m].z;
    }
    const ScalarField dx = differentiate(cx, order, scheme);
    const ScalarField dy = differentiate(cy, order, scheme);
    const ScalarField dz = differentiate(cz, order, scheme);
    NodeField d(n);
    for (int m = 0; m < n; ++m) d[m] = {dx[m], dy[m], dz[m]};
    return d;
}

CurveGeometry geometry(const DiscreteCurve& curve, DerivScheme scheme) {
    const int n = static_cast<int>(curve.size());
    CurveGeometry g;
    g.scheme = scheme;
    g.n = n;
    g.h = kTwoPi / n;
    g.nodes = curve.nodes;

    const NodeField d1 = differentiate(curve.nodes, 1, scheme);
    g.speed.resize(n);
    g.tangent.resize(n);
    g.normal.resize(n);
    g.dmu.resize(n);
    for (int m = 0; m < n; ++m) {
        const double v = d1[m].norm();
        if (v < 1e-12) throw DegenerateCurve("curve speed underflow");
        g.speed[m] = v;
        g.tangent[m] = d1[m] / v;
        g.normal[m] = cross(curve.nodes[m], g.tangent[m]).normalized();
        g.dmu[m] = v * g.h;
        g.length += g.dmu[m];
    }

    auto ds = [&](const NodeField& f) {
        NodeField d = differentiate(f, 1, scheme);
        for (int m = 0; m < n; ++m) d[m] = d[m] / g.speed[m];
        return d;
    };

    g.ds2 = ds(g.tangent);  // tangent is gamma'/|gamma'| exactly
    const NodeField ds3 = ds(g.ds2);
    g.ds4 = ds(ds3);

    g.kappa_vec.resize(n);
    g.kappa.resize(n);
    for (int m = 0; m < n; ++m) {
        g.kappa_vec[m] = g.ds2[m] - dot(curve.nodes[m], g.ds2[m]) * curve.nodes[m];
        g.kappa[m] = dot(g.kappa_vec[m], g.normal[m]);
    }

    auto project_normal = [&](NodeField f) {
        for (int m = 0; m < n; ++m)
            f[m] = f[m] - dot(f[m], g.tangent[m]) * g.tangent[m] -
                   dot(f[m], g.nodes[m]) * g.nodes[m];
        return f;
    };
    g.dkappa = project_normal(ds(g.kappa_vec));
    g.d2kappa = project_normal(ds(g.dkappa));
    g.d3kappa = project_normal(ds(g.d2kappa));
    return g;
}

namespace {

// p inside the minor arc from a to b (all unit, p on the arc's great circle).
bool within_arc(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& plane_normal) {
    return dot(cross(a, p), plane_normal) >= -1e-12 &&
           dot(cross(p, b), plane_normal) >= -1e-12;
}

bool arcs_intersect(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 n1 = cross(a, b);
    const Vec3 n2 = cross(c, d);
    const Vec3 dir = cross(n1, n2);
    const double len = dir.norm();
    if (len < 1e-14) {
        // Coplanar arcs: overlap iff an endpoint lies inside the other arc.
        for (const Vec3& p : {c, d})
            if (std::abs(dot(p, n1)) < 1e-12 * n1.norm() && within_arc(p, a, b, n1)) return true;
        for (const Vec3& p : {a, b})
            if (std::abs(dot(p, n2)) < 1e-12 * n2.norm() && within_arc(p, c, d, n2)) return true;
        return false;
    }
    const Vec3 p = dir / len;
    for (const Vec3& q : {p, -p})
        if (within_arc(q, a, b, n1) && within_arc(q, c, d, n2)) return true;
    return false;
}

}  // namespace

std::optional<CrossingPair> first_crossing(const DiscreteCurve& curve) {
    const int n = static_cast<int>(curve.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the seam
            const Vec3& a = curve.nodes[i];
            const Vec3& b = curve.nodes[(i + 1) % n];
            const Vec3& c = curve.nodes[j];
            const Vec3& d = curve.nodes[(j + 1) % n];
            if (arcs_intersect(a, b, c, d)) return CrossingPair{i, j};
        }
    }
    return std::nullopt;
}

bool is_embedded(const DiscreteCurve& curve) { return !first_crossing(curve).has_value(); }

PeriodicInterp::PeriodicInterp(NodeField values, DerivScheme scheme)
    : values_(std::move(values)), scheme_(scheme) {
    n_ = static_cast<int>(values_.size());
    h_ = kTwoPi / n_;
    if (scheme_ == DerivScheme::Spectral) {
        ScalarField comp(n_);
        const int kmax = n_ / 2;
        cos_coef_.assign(kmax + 1, Vec3{});
        sin_coef_.assign(kmax + 1, Vec3{});
        for (int c = 0; c < 3; ++c) {
            for (int m = 0; m < n_; ++m)
                comp[m] = (c == 0 ? values_[m].x : c == 1 ? values_[m].y : values_[m].z);
            const auto spec = detail::real_dft(comp);
            for (int k = 0; k <= kmax; ++k) {
                const bool edge = (k == 0) || (n_ % 2 == 0 && k == kmax);
                const double a = (edge ? 1.0 : 2.0) * spec[k].real() / n_;
                const double b = (edge ? 0.0 : -2.0) * spec[k].imag() / n_;
                auto set = [&](Vec3& v, double val) {
                    (c == 0 ? v.x : c == 1 ? v.y : v.z) = val;
                };
                set(cos_coef_[k], a);
                set(sin_coef_[k], b);
            }
        }
    }
}

Vec3 PeriodicInterp::operator()(double x) const {
    if (scheme_ == DerivScheme::Spectral) {
        Vec3 v = cos_coef_[0];
        const int kmax = n_ / 2;
        for (int k = 1; k <= kmax; ++k)
            v += cos_coef_[k] * std::cos(k * x) + sin_coef_[k] * std::sin(k * x);
        return v;
    }
    // 6-point Lagrange interpolation on the uniform periodic grid.
    double t = x / h_;
    t -= std::floor(t / n_) * n_;
    const int j = static_cast<int>(std::floor(t));
    const double s = t - j;
    Vec3 v{};
    for (int k = -2; k <= 3; ++k) {
        double w = 1.0;
        for (int l = -2; l <= 3; ++l) {
            if (l == k) continue;
            w *= (s - l) / (k - l);
        }
        v += w * values_[wrap(j + k, n_)];
    }
    return v;
}

DiscreteCurve resample_uniform_arclength(const DiscreteCurve& curve, DerivScheme scheme) {
    const int n = static_cast<int>(curve.size());
    const double h = kTwoPi / n;
    const NodeField d1 = differentiate(curve.nodes, 1, scheme);
    double length = 0.0;
    double v_min = std::numeric_limits<double>::max(), v_max = 0.0;
    for (const auto& d : d1) {
        const double v = d.norm();
        if (v < 1e-12) throw DegenerateCurve("resample: speed underflow");
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
        length += v * h;
    }
    // Already uniform in arclength: identity (keeps exact fixed points).
    if (v_max - v_min <= 1e-12 * v_max) return curve;

    const PeriodicInterp velocity_interp(d1, scheme);
    const PeriodicInterp node_interp(curve.nodes, scheme);
    auto inv_speed = [&](double x) { return 1.0 / velocity_interp(x).norm(); };

    // Node 0 stays anchored; the remaining parameters solve dx/dl = 1/v(x)
    // at equal arclength targets with RK4 substeps.
    NodeField out(n);
    out[0] = curve.nodes[0];
    double x = 0.0;
    const double dl_target = length / n;
    const int substeps = 16;
    const double dl = dl_target / substeps;
    for (int j = 1; j < n; ++j) {
        for (int s = 0; s < substeps; ++s) {
            const double k1 = inv_speed(x);
            const double k2 = inv_speed(x + 0.5 * dl * k1);
            const double k3 = inv_speed(x + 0.5 * dl * k2);
            const double k4 = inv_speed(x + dl * k3);
            x += dl * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
        }
        out[j] = node_interp(x).normalized();
    }
    DiscreteCurve result;
    result.nodes = std::move(out);
    result.orientation = curve.orientation;
    return result;
}

}  // namespace hopfflow
