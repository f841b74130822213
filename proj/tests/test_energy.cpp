#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfflow/curve_family.hpp"
#include "hopfflow/energy.hpp"
#include "hopfflow/quat.hpp"

using namespace hopfflow;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

// Scalar normal perturbation field from low Fourier modes.
NodeField normal_perturbation(const CurveGeometry& g, std::uint64_t seed, int max_mode = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> a(max_mode + 1), b(max_mode + 1);
    for (int k = 0; k <= max_mode; ++k) {
        a[k] = coef(rng);
        b[k] = coef(rng);
    }
    NodeField phi(g.n);
    for (int m = 0; m < g.n; ++m) {
        const double x = kTwoPi * m / g.n;
        double s = 0.0;
        for (int k = 0; k <= max_mode; ++k)
            s += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
        phi[m] = s * g.normal[m];
    }
    return phi;
}

double inner_l2(const NodeField& f, const NodeField& g, const ScalarField& dmu) {
    double s = 0.0;
    for (std::size_t m = 0; m < f.size(); ++m) s += dot(f[m], g[m]) * dmu[m];
    return s;
}

}  // namespace

TEST_CASE("elastic energy closed forms") {
    CHECK(elastic_energy(geometry(great_circle(256))) == doctest::Approx(kTwoPi).epsilon(1e-7));
    CHECK(elastic_energy(geometry(great_circle(256), DerivScheme::Spectral)) ==
          doctest::Approx(kTwoPi).epsilon(1e-12));
    CHECK(elastic_energy(geometry(latitude_circle(256, kPi / 3))) ==
          doctest::Approx(kTwoPi / std::sin(kPi / 3)).epsilon(1e-7));
    // theta = pi/4 leaves the E < 8 regime.
    const double e = elastic_energy(geometry(latitude_circle(256, kPi / 4)));
    CHECK(e == doctest::Approx(kTwoPi * std::sqrt(2.0)).epsilon(1e-7));
    CHECK(e > 8.0);
}

TEST_CASE("extrinsic energy equals elastic energy") {
    CHECK(extrinsic_energy(geometry(great_circle(256))) ==
          doctest::Approx(kTwoPi).epsilon(1e-7));
    CHECK(extrinsic_energy(geometry(latitude_circle(256, kPi / 3))) ==
          doctest::Approx(kTwoPi / std::sin(kPi / 3)).epsilon(1e-7));

    const auto curve = random_embedded_curve(512, 12);
    const auto g = geometry(curve);
    CHECK(std::abs(extrinsic_energy(g) - elastic_energy(g)) / elastic_energy(g) < 1e-6);
}

TEST_CASE("gradient: stationary on great circles, closed form on latitudes") {
    CHECK(sup_norm(gradient(geometry(great_circle(256)))) < 1e-10);

    const double theta = kPi / 3;
    const double kappa = 1.0 / std::tan(theta);
    const double expected = kappa * kappa * kappa + kappa;  // |grad| on a latitude circle
    const auto g = geometry(latitude_circle(256, theta));
    const NodeField grad = gradient(g);
    for (int m = 0; m < g.n; m += 13) {
        CHECK(grad[m].norm() == doctest::Approx(expected).epsilon(1e-7));
        // Direction along +nu (kappa > 0 side).
        CHECK(dot(grad[m], g.normal[m]) == doctest::Approx(expected).epsilon(1e-7));
    }
    CHECK(expected == doctest::Approx(0.76980).epsilon(1e-4));
}

TEST_CASE("gradient matches central finite differences of the energy") {
    const auto curve = random_embedded_curve(512, 77);
    const auto g = geometry(curve);
    const NodeField grad = gradient(g);

    std::mt19937_64 rng(101);
    const double eps = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        const NodeField phi = normal_perturbation(g, rng());
        auto shifted = [&](double step) {
            NodeField nodes(g.n);
            for (int m = 0; m < g.n; ++m)
                nodes[m] = (curve.nodes[m] + step * phi[m]).normalized();
            DiscreteCurve c;
            c.nodes = std::move(nodes);
            return elastic_energy(geometry(c));
        };
        const double fd = (shifted(eps) - shifted(-eps)) / (2 * eps);
        const double pairing = inner_l2(grad, phi, g.dmu);
        CHECK(std::abs(fd - pairing) / std::max(1.0, std::abs(fd)) < 1e-4);
    }
}

TEST_CASE("gradient: the two evaluation routes agree under refinement") {
    const auto r1 = gradient_mutual_residual(geometry(random_embedded_curve(128, 3)));
    const auto r2 = gradient_mutual_residual(geometry(random_embedded_curve(256, 3)));
    CHECK(r2 < r1);
    CHECK(r2 < 1e-4);
    // Spectral route: both paths nearly exact.
    CHECK(gradient_mutual_residual(geometry(random_embedded_curve(128, 3),
                                            DerivScheme::Spectral)) < 1e-8);
}

TEST_CASE("gradient is normal to the curve and the tangent") {
    const auto g = geometry(random_embedded_curve(256, 8));
    const NodeField grad = gradient(g);
    double tcomp = 0.0, gcomp = 0.0;
    for (int m = 0; m < g.n; ++m) {
        tcomp = std::max(tcomp, std::abs(dot(grad[m], g.tangent[m])));
        gcomp = std::max(gcomp, std::abs(dot(grad[m], g.nodes[m])));
    }
    CHECK(tcomp < 1e-5);
    CHECK(gcomp < 1e-5);
}

TEST_CASE("enclosed area: hemisphere, cap, complement") {
    CHECK(enclosed_area(geometry(great_circle(256))) == doctest::Approx(kTwoPi).epsilon(1e-9));  // kappa is exactly zero here

    const double theta = kPi / 3;
    const auto cap = enclosed_area(geometry(latitude_circle(256, theta)));
    CHECK(cap == doctest::Approx(kTwoPi * (1 - std::cos(theta))).epsilon(1e-7));
    CHECK(cap == doctest::Approx(kPi).epsilon(1e-7));

    const auto reversed = latitude_circle(256, theta).reversed();
    CHECK(enclosed_area(geometry(reversed)) == doctest::Approx(4 * kPi - cap).epsilon(1e-7));

    CHECK_THROWS_AS(enclosed_area(geometry(lissajous_curve(128))), NotEmbedded);
}

TEST_CASE("check_bounds on the reference cases") {
    // Great circle: all pass (spectral geometry keeps Teufel's equality case
    // at roundoff).
    {
        const auto curve = great_circle(256);
        const auto report = analyze(curve, DerivScheme::Spectral);
        for (const auto& f : check_bounds(report, report.energy)) CHECK(f.pass);
    }
    // Latitude pi/3: all pass with margins.
    {
        const auto curve = latitude_circle(256, kPi / 3);
        const auto report = analyze(curve, DerivScheme::Spectral);
        CHECK(report.energy == doctest::Approx(7.2552).epsilon(1e-4));
        for (const auto& f : check_bounds(report, report.energy)) CHECK(f.pass);
    }
    // Latitude pi/4: regime warning plus the other bounds still evaluated.
    {
        const auto curve = latitude_circle(256, kPi / 4);
        const auto report = analyze(curve, DerivScheme::Spectral);
        const auto findings = check_bounds(report, report.energy);
        bool regime_flagged = false;
        int evaluated = 0;
        for (const auto& f : findings) {
            if (f.name == "regime_energy_below_8") {
                regime_flagged = true;
                CHECK_FALSE(f.pass);
            } else {
                ++evaluated;
                CHECK(f.pass);
            }
        }
        CHECK(regime_flagged);
        CHECK(evaluated >= 4);
    }
}

TEST_CASE("scalars invariant under reparametrization, index rotation, rotation") {
    const auto curve = random_embedded_curve(256, 21);
    const auto base = analyze(curve, DerivScheme::CentralDiff4);

    // Uniform arclength resampling.
    const auto res = analyze(resample_uniform_arclength(curve), DerivScheme::CentralDiff4);
    CHECK(std::abs(res.energy - base.energy) / base.energy < 1e-7);
    CHECK(std::abs(res.length - base.length) / base.length < 1e-7);
    CHECK(std::abs(res.area - base.area) / base.area < 1e-6);

    // Node-index rotation.
    DiscreteCurve rotated;
    rotated.nodes.resize(curve.size());
    const int shift = 37;
    for (std::size_t m = 0; m < curve.size(); ++m)
        rotated.nodes[m] = curve.nodes[(m + shift) % curve.size()];
    const auto rot = analyze(rotated, DerivScheme::CentralDiff4);
    CHECK(std::abs(rot.energy - base.energy) < 1e-10);
    CHECK(std::abs(rot.area - base.area) < 1e-10);

    // Rotation of the sphere.
    const Quat r = Quat{0.3, -0.5, 0.7, 0.4}.normalized();
    DiscreteCurve moved;
    moved.nodes.resize(curve.size());
    for (std::size_t m = 0; m < curve.size(); ++m)
        moved.nodes[m] = rotate_s2(curve.nodes[m], r);
    const auto mov = analyze(moved, DerivScheme::CentralDiff4);
    CHECK(std::abs(mov.energy - base.energy) < 1e-9);
    CHECK(std::abs(mov.length - base.length) < 1e-10);
    CHECK(std::abs(mov.area - base.area) < 1e-9);
    CHECK(std::abs(mov.total_curvature - base.total_curvature) < 1e-9);
}
