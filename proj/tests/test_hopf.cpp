#include <doctest.h>

#include <cmath>

#include "hopfflow/curve_family.hpp"
#include "hopfflow/energy.hpp"
#include "hopfflow/flow.hpp"
#include "hopfflow/hopf_torus.hpp"

using namespace hopfflow;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2 * kPi;

double wrap_angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d < 0) d += kTwoPi;
    return std::min(d, kTwoPi - d);
}

double residual_of(const std::vector<IdentityResidual>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r.residual;
    FAIL("missing residual ", name);
    return 1.0;
}

}  // namespace

TEST_CASE("horizontal lift: holonomy equals half the enclosed area") {
    // Equator: A = 2 pi, holonomy pi.
    {
        const auto curve = great_circle(512);
        const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
        CHECK(wrap_angle_diff(lift.holonomy, kPi) < 1e-8);
        CHECK(lift.fiber_residual < 1e-8);
        CHECK(lift.horizontality_residual < 1e-8);
    }
    // Latitude pi/3: A = pi, holonomy pi/2.
    {
        const auto curve = latitude_circle(512, kPi / 3);
        const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
        CHECK(wrap_angle_diff(lift.holonomy, kPi / 2) < 1e-8);
        CHECK(lift.fiber_residual < 1e-8);
        CHECK(lift.horizontality_residual < 1e-8);
    }
    // Random embedded curve: compare against the computed area.
    {
        const auto curve = random_embedded_curve(512, 40);
        const auto area = enclosed_area(geometry(curve));
        const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
        CHECK(wrap_angle_diff(lift.holonomy, 0.5 * area) < 1e-6);
    }
}

TEST_CASE("horizontal lift: seed off the fiber is rejected") {
    const auto curve = latitude_circle(128, kPi / 3);
    CHECK_THROWS_AS(horizontal_lift(curve, Quat{1, 0, 0, 0}), SeedOffFiber);
}

TEST_CASE("horizontal lift: fiber-rotated seeds give left-translated lifts") {
    const auto curve = latitude_circle(256, kPi / 3);
    const Quat seed = fiber_point(curve.nodes[0]);
    const double phi = 0.8;
    const auto a = horizontal_lift(curve, seed);
    const auto b = horizontal_lift(curve, (exp_i(phi) * seed).normalized());
    double err = 0.0;
    for (std::size_t m = 0; m < a.eta.size(); ++m)
        err = std::max(err, (exp_i(phi) * a.eta[m] - b.eta[m]).norm());
    CHECK(err < 1e-9);
}

TEST_CASE("torus from the equator is the Clifford torus") {
    const auto curve = great_circle(256);
    const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
    auto mesh = build_torus(lift, 64);

    // In the (w,x | y,z) split both complex coordinates have modulus 1/sqrt 2.
    double err = 0.0;
    for (const auto& q : mesh.points) {
        err = std::max(err, std::abs(q.w * q.w + q.x * q.x - 0.5));
        err = std::max(err, std::abs(q.y * q.y + q.z * q.z - 0.5));
    }
    CHECK(err < 1e-8);

    // Fibers are exact great circles of length 2 pi.
    double len = 0.0;
    for (int f = 0; f < mesh.m; ++f) {
        const Quat p = mesh.points[mesh.index(10, f)];
        const Quat q = mesh.points[mesh.index(10, (f + 1) % mesh.m)];
        len += 2.0 * std::asin(0.5 * (p - q).norm());
    }
    CHECK(len == doctest::Approx(kTwoPi).epsilon(1e-12));

    surface_geometry(mesh);
    for (std::size_t idx = 0; idx < mesh.points.size(); idx += 41) {
        CHECK(std::abs(mesh.h_scalar[idx]) < 1e-6);
        CHECK(mesh.a0_sq[idx] == doctest::Approx(2.0).epsilon(1e-6));
    }
    CHECK(mesh.willmore == doctest::Approx(2 * kPi * kPi).epsilon(1e-4));
}

TEST_CASE("surface geometry: latitude torus closed forms") {
    const double theta = kPi / 3;
    const double kappa = 1.0 / std::tan(theta);
    const auto curve = latitude_circle(256, theta);
    const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
    auto mesh = build_torus(lift, 64);
    surface_geometry(mesh);

    for (std::size_t idx = 0; idx < mesh.points.size(); idx += 97) {
        CHECK(std::abs(mesh.h_scalar[idx]) == doctest::Approx(2 * kappa).epsilon(1e-5));
        CHECK(mesh.a0_sq[idx] == doctest::Approx(8.0 / 3.0).epsilon(1e-5));
        // Off-diagonal entry of A in the orthonormal (lift, fiber) frame.
        const double on_offdiag = mesh.a12[idx] / std::sqrt(mesh.g11[idx] * mesh.g22[idx]);
        CHECK(std::abs(on_offdiag) == doctest::Approx(1.0).epsilon(1e-5));
    }

    // Ambient-R^4 conversions: A_R4 = A_S3 - X g, H_R4 = H_S3 - 2X. The
    // trace of A_R4 with the inverse metric must reproduce H_R4, and the
    // R^4 mean curvature of a minimal-in-S^3 direction keeps |H_R4|^2 = h^2+4.
    for (std::size_t idx = 0; idx < mesh.points.size(); idx += 173) {
        const Quat& x = mesh.points[idx];
        const Quat h_r4 = mesh.mean_curv_r4(idx);
        CHECK(h_r4.norm_sq() ==
              doctest::Approx(mesh.h_scalar[idx] * mesh.h_scalar[idx] + 4.0).epsilon(1e-5));
        CHECK(std::abs(x.dot(mesh.normal[idx])) < 1e-10);

        const double det = mesh.det_g[idx];
        const double i11 = mesh.g22[idx] / det, i12 = -mesh.g12[idx] / det,
                     i22 = mesh.g11[idx] / det;
        const Quat trace_r4 = i11 * mesh.second_fundamental_r4(idx, 0, 0) +
                              2.0 * i12 * mesh.second_fundamental_r4(idx, 0, 1) +
                              i22 * mesh.second_fundamental_r4(idx, 1, 1);
        CHECK((trace_r4 - h_r4).norm() < 1e-9);
    }
}

TEST_CASE("hopf identities on the reference tori") {
    const double theta = kPi / 3;
    for (int variant = 0; variant < 2; ++variant) {
        const auto curve = variant == 0 ? great_circle(256) : latitude_circle(256, theta);
        const auto geom = geometry(curve);
        const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
        auto mesh = build_torus(lift, 64);
        surface_geometry(mesh);
        const auto rs = verify_hopf_identities(mesh, geom);
        CHECK(residual_of(rs, "mean_curvature") < 1e-5);
        CHECK(residual_of(rs, "tracefree_norm") < 1e-5);
        CHECK(residual_of(rs, "q_a0_h") < 1e-5);
        CHECK(residual_of(rs, "normal_laplace_h") < 1e-4);
        CHECK(residual_of(rs, "willmore_gradient") < 1e-4);
        CHECK(residual_of(rs, "willmore_energy") < 1e-4);
        CHECK(residual_of(rs, "dissipation_identity") < 1e-4);
        CHECK(residual_of(rs, "fiber_constancy") < 1e-8);
        if (variant == 0) {
            CHECK(mesh.willmore == doctest::Approx(2 * kPi * kPi).epsilon(1e-4));
        } else {
            CHECK(mesh.willmore == doctest::Approx(kPi * elastic_energy(geom)).epsilon(1e-4));
            CHECK(mesh.willmore < 8 * kPi);
        }
    }
}

TEST_CASE("hopf identities tighten under refinement on a random curve") {
    auto residuals = [](int n, int m) {
        const auto curve = random_embedded_curve(n, 31);
        const auto geom = geometry(curve);
        const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
        auto mesh = build_torus(lift, m);
        surface_geometry(mesh);
        return verify_hopf_identities(mesh, geom);
    };
    const auto coarse = residuals(128, 32);
    const auto fine = residuals(256, 64);
    for (const auto& name : {"mean_curvature", "normal_laplace_h", "willmore_gradient"}) {
        CHECK(residual_of(fine, name) < residual_of(coarse, name));
    }
    CHECK(residual_of(fine, "willmore_energy") < 1e-3);
}

TEST_CASE("flow correspondence: pushed gradient and velocity") {
    const double theta = kPi / 3;
    const auto curve = latitude_circle(256, theta);
    const auto geom = geometry(curve);
    const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
    auto mesh = build_torus(lift, 64);
    surface_geometry(mesh);

    const auto rs = verify_flow_correspondence(mesh, geom);
    CHECK(residual_of(rs, "hopf_willmore_identity") < 1e-4);
    CHECK(residual_of(rs, "velocity_correspondence") < 1e-4);

    // The pushed surface velocity has the known magnitude sqrt(3)/4.
    const std::size_t idx = mesh.index(7, 11);
    const Quat w = mesh.will_grad[idx];
    const double a0sq = mesh.a0_sq[idx];
    const Quat sv = (-1.0 / (a0sq * a0sq)) * w;
    const Vec3 pushed =
        sphere_coords(involution(sv) * mesh.points[idx] + involution(mesh.points[idx]) * sv);
    CHECK(pushed.norm() == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-4));
    const NodeField vel = velocity(geom);
    CHECK((pushed - vel[7]).norm() < 1e-4);
}

TEST_CASE("verify rejects mismatched curve and mesh") {
    const auto curve = latitude_circle(128, kPi / 3);
    const auto other = geometry(latitude_circle(128, 1.2));
    const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
    auto mesh = build_torus(lift, 16);
    surface_geometry(mesh);
    CHECK_THROWS_AS(verify_hopf_identities(mesh, other), MeshCurveMismatch);
}

TEST_CASE("build_torus validates the fiber resolution") {
    const auto curve = latitude_circle(128, kPi / 3);
    const auto lift = horizontal_lift(curve, fiber_point(curve.nodes[0]));
    CHECK_THROWS_AS(build_torus(lift, 8), TooCoarse);
}
