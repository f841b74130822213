#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfflow/curve.hpp"
#include "hopfflow/curve_family.hpp"
#include "hopfflow/quat.hpp"

using namespace hopfflow;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

// Latitude circle under the parameter stretch x -> x + 0.3 sin x: same trace,
// genuinely non-uniform speed.
DiscreteCurve stretched_latitude(int n, double theta) {
    NodeField nodes(n);
    for (int m = 0; m < n; ++m) {
        const double x = kTwoPi * m / n;
        const double y = x + 0.3 * std::sin(x);
        nodes[m] = {std::cos(theta), std::sin(theta) * std::cos(y),
                    std::sin(theta) * std::sin(y)};
    }
    return DiscreteCurve::from_nodes(std::move(nodes));
}

double max_kappa_error(const CurveGeometry& g, double expected) {
    double err = 0.0;
    for (int m = 0; m < g.n; ++m)
        err = std::max(err, std::abs(g.kappa_vec[m].norm() - expected));
    return err;
}

double min_distance_to_interp(const PeriodicInterp& interp, const Vec3& p, double x_guess) {
    // Golden-section refinement around the guess.
    double a = x_guess - 0.2, b = x_guess + 0.2;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 80; ++it) {
        const double fc = (interp(c) - p).norm();
        const double fd = (interp(d) - p).norm();
        if (fc < fd) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return (interp(0.5 * (a + b)) - p).norm();
}

}  // namespace

TEST_CASE("differentiate: constants and eigenfunctions") {
    const int n = 64;
    NodeField constant(n, Vec3{0.3, -0.7, 1.1});
    for (auto scheme : {DerivScheme::CentralDiff4, DerivScheme::Spectral}) {
        const NodeField d = differentiate(constant, 1, scheme);
        CHECK(sup_norm(d) < 1e-13);
    }

    // Mode-1 circle pattern: second derivative is minus the sequence (exact
    // for both schemes; the stencil factor cancels only in ratios, so allow
    // the spectral path to be exact and the stencil path O(h^4)).
    NodeField circ(n);
    for (int m = 0; m < n; ++m) {
        const double x = kTwoPi * m / n;
        circ[m] = {std::cos(x), std::sin(x), 0.0};
    }
    const NodeField d2s = differentiate(circ, 2, DerivScheme::Spectral);
    double err = 0.0;
    for (int m = 0; m < n; ++m) err = std::max(err, (d2s[m] + circ[m]).norm());
    CHECK(err < 1e-12);
    const NodeField d2f = differentiate(circ, 2, DerivScheme::CentralDiff4);
    err = 0.0;
    for (int m = 0; m < n; ++m) err = std::max(err, (d2f[m] + circ[m]).norm());
    CHECK(err < 1e-4);  // (2 pi/64)^4 / 90 scale
}

TEST_CASE("differentiate: analytic Fourier oracle") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const int modes = 6;
    double a[3][7], b[3][7];
    for (int c = 0; c < 3; ++c)
        for (int k = 1; k <= modes; ++k) {
            a[c][k] = coef(rng);
            b[c][k] = coef(rng);
        }
    auto value = [&](double x, int order) {
        Vec3 v{};
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 1; k <= modes; ++k) {
                const double kp = std::pow(double(k), order);
                const double phase = order * kPi / 2.0;  // d/dx cos = cos(x + pi/2) etc.
                s += a[c][k] * kp * std::cos(k * x + phase) +
                     b[c][k] * kp * std::sin(k * x + phase);
            }
            (c == 0 ? v.x : c == 1 ? v.y : v.z) = s;
        }
        return v;
    };

    auto sample = [&](int n) {
        NodeField f(n);
        for (int m = 0; m < n; ++m) f[m] = value(kTwoPi * m / n, 0);
        return f;
    };

    for (int order = 1; order <= 4; ++order) {
        // Spectral: exact to roundoff relative to the derivative scale.
        const int n = 64;
        const NodeField f = sample(n);
        const NodeField d = differentiate(f, order, DerivScheme::Spectral);
        double scale = 0.0, err = 0.0;
        for (int m = 0; m < n; ++m) {
            const Vec3 exact = value(kTwoPi * m / n, order);
            scale = std::max(scale, exact.norm());
            err = std::max(err, (d[m] - exact).norm());
        }
        CHECK(err / scale < 1e-10);
    }

    for (int order : {1, 2, 3, 4}) {
        // Stencils: 4th-order refinement between N = 128 and 256.
        double errs[2];
        int idx = 0;
        for (int n : {128, 256}) {
            const NodeField f = sample(n);
            const NodeField d = differentiate(f, order, DerivScheme::CentralDiff4);
            double err = 0.0;
            for (int m = 0; m < n; ++m)
                err = std::max(err, (d[m] - value(kTwoPi * m / n, order)).norm());
            errs[idx++] = err;
        }
        CHECK(errs[0] / errs[1] > 10.0);
    }
}

TEST_CASE("differentiate: too coarse or bad order") {
    NodeField f(8, Vec3{1, 0, 0});
    CHECK_THROWS_AS(differentiate(f, 1, DerivScheme::CentralDiff4), TooCoarse);
    NodeField g(32, Vec3{1, 0, 0});
    CHECK_THROWS_AS(differentiate(g, 5, DerivScheme::CentralDiff4), Error);
    CHECK_THROWS_AS(differentiate(g, 0, DerivScheme::Spectral), Error);
}

TEST_CASE("strong parameter distortion raises the quasi-uniformity warning") {
    NodeField nodes(128);
    for (int m = 0; m < 128; ++m) {
        const double x = kTwoPi * m / 128;
        const double y = x + 0.9 * std::sin(x);  // chord ratio ~ 19
        nodes[m] = {0.0, std::cos(y), std::sin(y)};
    }
    const auto warned = DiscreteCurve::from_nodes(nodes);
    CHECK(warned.quasi_uniform_warning);
    CHECK_FALSE(great_circle(128).quasi_uniform_warning);
}

TEST_CASE("geometry: great circle is a geodesic") {
    const auto curve = great_circle(256);
    const auto g = geometry(curve);
    CHECK(std::abs(g.length - kTwoPi) < 1e-6);
    CHECK(g.sup_kappa() < 1e-12);
    CHECK(sup_norm(g.kappa_vec) < 1e-12);
}

TEST_CASE("geometry: latitude circle closed forms") {
    const double theta = kPi / 3.0;
    const auto g = geometry(latitude_circle(256, theta));
    const double expected_kappa = 1.0 / std::tan(theta);
    CHECK(std::abs(g.length - kTwoPi * std::sin(theta)) < 1e-7);
    for (int m = 0; m < g.n; m += 17) {
        CHECK(g.kappa[m] == doctest::Approx(expected_kappa).epsilon(1e-9));
        CHECK(g.kappa[m] > 0.0);  // north cap on the left
    }
    CHECK(sup_norm(g.dkappa) < 1e-10);
    CHECK(sup_norm(g.d2kappa) < 1e-8);
}

TEST_CASE("geometry: curvature orthogonality and Frenet relation") {
    const auto curve = random_embedded_curve(256, 99);
    const auto g = geometry(curve, DerivScheme::Spectral);
    double t_comp = 0.0, g_comp = 0.0, frenet = 0.0;
    const NodeField dsT = differentiate(g.tangent, 1, DerivScheme::Spectral);
    for (int m = 0; m < g.n; ++m) {
        t_comp = std::max(t_comp, std::abs(dot(g.kappa_vec[m], g.tangent[m])));
        g_comp = std::max(g_comp, std::abs(dot(g.kappa_vec[m], g.nodes[m])));
        const Vec3 cov = dsT[m] / g.speed[m] -
                         dot(dsT[m] / g.speed[m], g.nodes[m]) * g.nodes[m];
        frenet = std::max(frenet, std::abs(dot(cov, g.normal[m]) - g.kappa[m]));
        frenet = std::max(frenet, std::abs(dot(cov, g.tangent[m])));
    }
    CHECK(t_comp < 1e-8);
    CHECK(g_comp < 1e-14);  // exact by construction
    CHECK(frenet < 1e-8);
}

TEST_CASE("geometry: refinement order on the stretched latitude oracle") {
    const double theta = kPi / 3.0;
    const double expected = 1.0 / std::tan(theta);
    const double e1 = max_kappa_error(geometry(stretched_latitude(128, theta)), expected);
    const double e2 = max_kappa_error(geometry(stretched_latitude(256, theta)), expected);
    CHECK(e1 / e2 > 10.0);  // scheme order >= 4
    CHECK(e2 < 1e-5);
}

TEST_CASE("geometry: quaternion curvature formula agrees with the vector form") {
    // kappa_vec = -(1/|gamma'|^2) (conj(gamma') nu') nu, all factors read as
    // quaternions in span{1, j, k}.
    for (const auto& curve :
         {stretched_latitude(128, kPi / 3.0), random_embedded_curve(128, 5)}) {
        const auto g = geometry(curve, DerivScheme::Spectral);
        const NodeField dgamma = differentiate(curve.nodes, 1, DerivScheme::Spectral);
        const NodeField dnu = differentiate(g.normal, 1, DerivScheme::Spectral);
        double err = 0.0, icomp = 0.0;
        for (int m = 0; m < g.n; ++m) {
            const Quat prod = to_quat(dgamma[m]).conj() * to_quat(dnu[m]);
            const Quat kq = (prod * to_quat(g.normal[m])) * (-1.0 / dgamma[m].norm_sq());
            icomp = std::max(icomp, std::abs(kq.x));
            err = std::max(err, (sphere_coords(kq) - g.kappa_vec[m]).norm());
        }
        CHECK(icomp < 1e-7);
        CHECK(err < 1e-6);
    }
}

TEST_CASE("geometry: degenerate curve rejected") {
    NodeField nodes(64);
    for (int m = 0; m < 64; ++m) {
        const double x = kTwoPi * m / 64;
        nodes[m] = Vec3{0, std::cos(x), std::sin(x)};
    }
    nodes[10] = nodes[9];
    CHECK_THROWS_AS(DiscreteCurve::from_nodes(nodes), DegenerateCurve);
}

TEST_CASE("is_embedded: circles yes, figure-eight no") {
    CHECK(is_embedded(great_circle(128)));
    CHECK(is_embedded(latitude_circle(128, kPi / 3.0)));

    const auto eight = lissajous_curve(256);
    const auto crossing = first_crossing(eight);
    REQUIRE(crossing.has_value());
    // The reported segments really do come close to each other.
    const int n = static_cast<int>(eight.size());
    const Vec3& a = eight.nodes[crossing->seg_a];
    const Vec3& b = eight.nodes[(crossing->seg_a + 1) % n];
    const Vec3& c = eight.nodes[crossing->seg_b];
    const Vec3& d = eight.nodes[(crossing->seg_b + 1) % n];
    double min_dist = 10.0;
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
            const Vec3 p = (a * (1.0 - i / 8.0) + b * (i / 8.0)).normalized();
            const Vec3 q = (c * (1.0 - j / 8.0) + d * (j / 8.0)).normalized();
            min_dist = std::min(min_dist, (p - q).norm());
        }
    CHECK(min_dist < (a - b).norm());
}

TEST_CASE("resample: uniform great circle is a fixed point") {
    const auto curve = great_circle(128);
    const auto back = resample_uniform_arclength(curve);
    double err = 0.0;
    for (std::size_t m = 0; m < curve.size(); ++m)
        err = std::max(err, (curve.nodes[m] - back.nodes[m]).norm());
    CHECK(err < 1e-12);
}

TEST_CASE("resample: stretched circle restored to uniform spacing") {
    const double theta = kPi / 3.0;
    for (auto scheme : {DerivScheme::Spectral, DerivScheme::CentralDiff4}) {
        const int n = scheme == DerivScheme::Spectral ? 256 : 512;
        const auto curve = stretched_latitude(n, theta);
        const auto uniform = resample_uniform_arclength(curve, scheme);

        double min_chord = 10.0, max_chord = 0.0;
        for (int m = 0; m < n; ++m) {
            const double chord = (uniform.nodes[(m + 1) % n] - uniform.nodes[m]).norm();
            min_chord = std::min(min_chord, chord);
            max_chord = std::max(max_chord, chord);
        }
        CHECK(max_chord / min_chord - 1.0 < 1e-6);

        // Trace unchanged: every new node lies on the original interpolant.
        const PeriodicInterp interp(curve.nodes, scheme);
        double hausdorff = 0.0;
        for (int m = 0; m < n; ++m) {
            // x-guess from the inverse stretch near uniform arclength.
            const double guess = kTwoPi * m / n;
            double best = 10.0;
            for (double off = -0.5; off <= 0.5; off += 0.1)
                best = std::min(best,
                                min_distance_to_interp(interp, uniform.nodes[m], guess + off));
            hausdorff = std::max(hausdorff, best);
        }
        CHECK(hausdorff < 1e-8);

        const double len_orig = geometry(curve, scheme).length;
        const double len_new = geometry(uniform, scheme).length;
        CHECK(std::abs(len_new - len_orig) / len_orig < 1e-8);
    }
}
