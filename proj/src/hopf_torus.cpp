#include "hopfflow/hopf_torus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hopfflow/energy.hpp"
#include "util.hpp"

namespace hopfflow {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_two_pi(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

// Lift ODE right-hand side: eta' = 1/2 invol(conj(eta)) * gamma'(x). This is
// the unique tangent vector satisfying the fiber, horizontality and unit
// conditions.
Quat lift_rhs(const Quat& eta, const Vec3& gamma_prime) {
    return 0.5 * (involution(eta.conj()) * to_quat(gamma_prime));
}

// Log and exp between unit quaternions near 1 and imaginary quaternions.
Quat quat_log(const Quat& q) {
    const double im = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    if (im < 1e-300) return {0, 0, 0, 0};
    const double theta = std::atan2(im, q.w);
    return {0.0, q.x * theta / im, q.y * theta / im, q.z * theta / im};
}

Quat quat_exp(const Quat& v) {
    const double theta = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    if (theta < 1e-300) return {1, 0, 0, 0};
    const double s = std::sin(theta) / theta;
    return {std::cos(theta), v.x * s, v.y * s, v.z * s};
}

}  // namespace

HorizontalLift horizontal_lift(const DiscreteCurve& curve, const Quat& seed,
                               DerivScheme scheme) {
    const int n = static_cast<int>(curve.size());
    require_unit(seed, "horizontal_lift: seed not on S^3");
    const Vec3 base = hopf_map(seed);
    if ((base - curve.nodes[0]).norm() > 1e-6)
        throw SeedOffFiber("horizontal_lift: seed does not project onto the first node");

    const double h = kTwoPi / n;
    // The ODE is integrated against the trigonometric interpolant of the
    // node derivative: stencil derivatives carry a mode-dependent scaling
    // that would otherwise leak an O(h^4) closure defect into the seam.
    const NodeField d1 = differentiate(curve.nodes, 1, DerivScheme::Spectral);
    const PeriodicInterp dgamma(d1, DerivScheme::Spectral);

    HorizontalLift lift;
    lift.seed = seed;
    lift.curve_nodes = curve.nodes;
    lift.curve_orientation = curve.orientation;
    lift.scheme = scheme;
    lift.eta.resize(n);
    lift.eta[0] = seed;

    // Classical RK4 with substeps; the accumulated error stays near the
    // roundoff floor so the seam glue is clean.
    Quat eta = seed;
    const int substeps = 4;
    const double dx = h / substeps;
    for (int m = 0; m < n; ++m) {
        double x = m * h;
        for (int s = 0; s < substeps; ++s) {
            const Quat k1 = lift_rhs(eta, dgamma(x));
            const Quat k2 = lift_rhs(eta + 0.5 * dx * k1, dgamma(x + 0.5 * dx));
            const Quat k3 = lift_rhs(eta + 0.5 * dx * k2, dgamma(x + 0.5 * dx));
            const Quat k4 = lift_rhs(eta + dx * k3, dgamma(x + dx));
            eta = eta + (dx / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            eta = eta.normalized();
            x += dx;
        }
        if (m + 1 < n) lift.eta[m + 1] = eta;
    }

    // End phase: eta(2 pi) = e^{i delta} eta(0).
    const Quat closure = eta * lift.eta[0].conj();
    lift.raw_end_phase = std::atan2(closure.x, closure.w);
    lift.holonomy = wrap_two_pi(-lift.raw_end_phase);

    // The integrated lift misses exact twisted closure by the accumulated
    // ODE error. A smooth left-multiplied ramp distributes that defect along
    // the curve so the seam extension eta(x + 2 pi) = e^{i delta} eta(x) is
    // smooth to roundoff; the per-node perturbation is of the same size as
    // the integration error itself.
    const Quat end_factor = exp_i(lift.raw_end_phase) * closure.conj();
    const Quat w = quat_log(end_factor);
    for (int m = 1; m < n; ++m)
        lift.eta[m] = (quat_exp(w * (static_cast<double>(m) / n)) * lift.eta[m]).normalized();

    // Fiber residual against the curve.
    double fiber = 0.0;
    for (int m = 0; m < n; ++m)
        fiber = std::max(fiber, (hopf_map(lift.eta[m]) - curve.nodes[m]).norm());
    fiber = std::max(fiber, std::max(std::abs(closure.y), std::abs(closure.z)));
    lift.fiber_residual = fiber;

    const Quat twist = exp_i(lift.raw_end_phase);
    const Quat twist_inv = exp_i(-lift.raw_end_phase);
    auto eta_at = [&](int m) -> Quat {
        if (m >= n) return twist * lift.eta[m - n];
        if (m < 0) return twist_inv * lift.eta[m + n];
        return lift.eta[m];
    };
    double horiz = 0.0;
    double speed_scale = 0.0;
    for (int m = 0; m < n; ++m) {
        const Quat deta = (eta_at(m - 2) - 8.0 * eta_at(m - 1) + 8.0 * eta_at(m + 1) -
                           eta_at(m + 2)) /
                          (12.0 * h);
        const Quat fiber_dir = Quat{0, 1, 0, 0} * lift.eta[m];
        horiz = std::max(horiz, std::abs(deta.dot(fiber_dir)));
        speed_scale = std::max(speed_scale, deta.norm());
    }
    lift.horizontality_residual = horiz / std::max(speed_scale, 1e-14);
    return lift;
}

Quat HopfTorusMesh::point(int s, int phi) const {
    int p = 0;
    while (s >= n) {
        s -= n;
        ++p;
    }
    while (s < 0) {
        s += n;
        --p;
    }
    phi %= m;
    if (phi < 0) phi += m;
    Quat q = points[index(s, phi)];
    if (p != 0) q = exp_i(p * raw_end_phase) * q;
    return q;
}

HopfTorusMesh build_torus(const HorizontalLift& lift, int fiber_res) {
    if (fiber_res < 16) throw TooCoarse("build_torus: fiber resolution must be at least 16");
    HopfTorusMesh mesh;
    mesh.n = static_cast<int>(lift.eta.size());
    mesh.m = fiber_res;
    mesh.raw_end_phase = lift.raw_end_phase;
    mesh.curve_nodes = lift.curve_nodes;
    mesh.curve_orientation = lift.curve_orientation;

    mesh.points.resize(static_cast<std::size_t>(mesh.n) * mesh.m);
    for (int s = 0; s < mesh.n; ++s) {
        for (int f = 0; f < mesh.m; ++f) {
            const double phi = kTwoPi * f / mesh.m;
            mesh.points[mesh.index(s, f)] = exp_i(phi) * lift.eta[s];
        }
    }

    const NodeField d1 = differentiate(lift.curve_nodes, 1, lift.scheme);
    mesh.curve_normals.resize(mesh.n);
    for (int s = 0; s < mesh.n; ++s)
        mesh.curve_normals[s] = cross(lift.curve_nodes[s], d1[s].normalized()).normalized();
    return mesh;
}

namespace {

// Grid field of R^4 vectors with the same seam behaviour as the mesh points:
// +2 pi in s multiplies by e^{i raw_end_phase} on the left (all fields here
// are equivariant under the fiber rotation), phi is plain periodic.
struct EquivariantField {
    const HopfTorusMesh* mesh;
    std::vector<Quat> values;

    Quat at(int s, int phi) const {
        const int n = mesh->n;
        const int m = mesh->m;
        int p = 0;
        while (s >= n) {
            s -= n;
            ++p;
        }
        while (s < 0) {
            s += n;
            --p;
        }
        phi %= m;
        if (phi < 0) phi += m;
        Quat q = values[mesh->index(s, phi)];
        if (p != 0) q = exp_i(p * mesh->raw_end_phase) * q;
        return q;
    }
};

using Getter = std::function<Quat(int, int)>;

Quat d1_stencil_s(const Getter& f, int s, int phi, double h) {
    return (f(s - 2, phi) - 8.0 * f(s - 1, phi) + 8.0 * f(s + 1, phi) - f(s + 2, phi)) /
           (12.0 * h);
}

Quat d1_stencil_phi(const Getter& f, int s, int phi, double h) {
    return (f(s, phi - 2) - 8.0 * f(s, phi - 1) + 8.0 * f(s, phi + 1) - f(s, phi + 2)) /
           (12.0 * h);
}

}  // namespace

void surface_geometry(HopfTorusMesh& mesh) {
    const int n = mesh.n;
    const int m = mesh.m;
    if (n < 64 || m < 16)
        throw TooCoarse("surface_geometry: mesh resolution must be at least 64 x 16");
    const std::size_t total = static_cast<std::size_t>(n) * m;
    const double hs = kTwoPi / n;
    const double hp = kTwoPi / m;

    auto grid_point = [&](int s, int phi) { return mesh.point(s, phi); };

    EquivariantField xs{&mesh, std::vector<Quat>(total)};
    EquivariantField xp{&mesh, std::vector<Quat>(total)};
    detail::parallel_for(total, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / m;
        const int f = static_cast<int>(idx) % m;
        xs.values[idx] = d1_stencil_s(grid_point, s, f, hs);
        xp.values[idx] = d1_stencil_phi(grid_point, s, f, hp);
    });

    auto xs_at = [&](int s, int f) { return xs.at(s, f); };
    auto xp_at = [&](int s, int f) { return xp.at(s, f); };

    mesh.g11.assign(total, 0.0);
    mesh.g12.assign(total, 0.0);
    mesh.g22.assign(total, 0.0);
    mesh.det_g.assign(total, 0.0);
    mesh.dmu.assign(total, 0.0);
    mesh.normal.assign(total, Quat{});
    mesh.a11.assign(total, 0.0);
    mesh.a12.assign(total, 0.0);
    mesh.a22.assign(total, 0.0);
    mesh.h_scalar.assign(total, 0.0);
    mesh.a0_sq.assign(total, 0.0);
    mesh.mean_curv.assign(total, Quat{});
    mesh.q_a0_h.assign(total, Quat{});

    std::vector<Quat> xss(total), xsp(total), xpp(total);
    detail::parallel_for(total, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / m;
        const int f = static_cast<int>(idx) % m;
        xss[idx] = d1_stencil_s(xs_at, s, f, hs);
        xsp[idx] = d1_stencil_phi(xs_at, s, f, hp);
        xpp[idx] = d1_stencil_phi(xp_at, s, f, hp);
    });

    bool degenerate = false;
    detail::parallel_for(total, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / m;
        const Quat& x = mesh.points[idx];
        const Quat& us = xs.values[idx];
        const Quat& up = xp.values[idx];
        const double g11 = us.dot(us);
        const double g12 = us.dot(up);
        const double g22 = up.dot(up);
        const double det = g11 * g22 - g12 * g12;
        mesh.g11[idx] = g11;
        mesh.g12[idx] = g12;
        mesh.g22[idx] = g22;
        mesh.det_g[idx] = det;
        if (det < 1e-12 * std::max(1.0, g11 * g22)) {
            degenerate = true;
            return;
        }
        mesh.dmu[idx] = std::sqrt(det) * hs * hp;

        Quat normal = cross4(x, us, up).normalized();
        const Vec3 pushed = sphere_coords(involution(normal) * x + involution(x) * normal);
        if (dot(pushed, mesh.curve_normals[s]) < 0.0) normal = -normal;
        mesh.normal[idx] = normal;

        const double a11 = xss[idx].dot(normal);
        const double a12 = xsp[idx].dot(normal);
        const double a22 = xpp[idx].dot(normal);
        mesh.a11[idx] = a11;
        mesh.a12[idx] = a12;
        mesh.a22[idx] = a22;

        const double h = (g22 * a11 - 2.0 * g12 * a12 + g11 * a22) / det;
        mesh.h_scalar[idx] = h;
        mesh.mean_curv[idx] = h * normal;

        // Tracefree part and its squared norm with indices raised by g.
        const double b11 = a11 - 0.5 * g11 * h;
        const double b12 = a12 - 0.5 * g12 * h;
        const double b22 = a22 - 0.5 * g22 * h;
        const double i11 = g22 / det, i12 = -g12 / det, i22 = g11 / det;
        // C = G^-1 B, |A^0|^2 = tr(C C).
        const double c11 = i11 * b11 + i12 * b12;
        const double c12 = i11 * b12 + i12 * b22;
        const double c21 = i12 * b11 + i22 * b12;
        const double c22 = i12 * b12 + i22 * b22;
        const double a0sq = c11 * c11 + 2.0 * c12 * c21 + c22 * c22;
        mesh.a0_sq[idx] = a0sq;
        mesh.q_a0_h[idx] = (a0sq * h) * normal;
    });
    if (degenerate) throw DegenerateMetric("surface_geometry: metric determinant underflow");

    // Normal Beltrami-Laplacian of the mean curvature field.
    EquivariantField w1{&mesh, std::vector<Quat>(total)};
    EquivariantField w2{&mesh, std::vector<Quat>(total)};
    EquivariantField hfield{&mesh, mesh.mean_curv};
    auto h_at = [&](int s, int f) { return hfield.at(s, f); };
    detail::parallel_for(total, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / m;
        const int f = static_cast<int>(idx) % m;
        const Quat& normal = mesh.normal[idx];
        w1.values[idx] = d1_stencil_s(h_at, s, f, hs).dot(normal) * normal;
        w2.values[idx] = d1_stencil_phi(h_at, s, f, hp).dot(normal) * normal;
    });
    auto w1_at = [&](int s, int f) { return w1.at(s, f); };
    auto w2_at = [&](int s, int f) { return w2.at(s, f); };

    mesh.laplace_h.assign(total, Quat{});
    mesh.will_grad.assign(total, Quat{});
    detail::parallel_for(total, [&](std::size_t idx) {
        const int s = static_cast<int>(idx) / m;
        const int f = static_cast<int>(idx) % m;
        const Quat& normal = mesh.normal[idx];
        const Quat& us = xs.values[idx];
        const Quat& up = xp.values[idx];
        const double det = mesh.det_g[idx];
        const double i11 = mesh.g22[idx] / det;
        const double i12 = -mesh.g12[idx] / det;
        const double i22 = mesh.g11[idx] / det;

        const Quat dw[2][2] = {
            {d1_stencil_s(w1_at, s, f, hs), d1_stencil_s(w2_at, s, f, hs)},
            {d1_stencil_phi(w1_at, s, f, hp), d1_stencil_phi(w2_at, s, f, hp)}};
        const Quat w[2] = {w1.values[idx], w2.values[idx]};

        // Christoffel symbols from the second derivative vectors.
        const Quat xkl[2][2] = {{xss[idx], xsp[idx]}, {xsp[idx], xpp[idx]}};
        Quat lap{};
        const double ginv[2][2] = {{i11, i12}, {i12, i22}};
        for (int k = 0; k < 2; ++k) {
            for (int l = 0; l < 2; ++l) {
                const double ts = xkl[k][l].dot(us);
                const double tp = xkl[k][l].dot(up);
                const double gamma1 = i11 * ts + i12 * tp;
                const double gamma2 = i12 * ts + i22 * tp;
                const Quat second = dw[k][l].dot(normal) * normal - gamma1 * w[0] - gamma2 * w[1];
                lap += ginv[k][l] * second;
            }
        }
        mesh.laplace_h[idx] = lap;
        mesh.will_grad[idx] = 0.5 * (lap + mesh.q_a0_h[idx]);
    });

    mesh.area = 0.0;
    mesh.willmore = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        mesh.area += mesh.dmu[idx];
        mesh.willmore += (1.0 + 0.25 * mesh.h_scalar[idx] * mesh.h_scalar[idx]) * mesh.dmu[idx];
    }
    mesh.has_geometry = true;
}

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

void require_matching(const HopfTorusMesh& mesh, const CurveGeometry& geom) {
    if (!mesh.has_geometry)
        throw Error("verify: call surface_geometry on the mesh first");
    if (static_cast<int>(mesh.curve_nodes.size()) != geom.n)
        throw MeshCurveMismatch("verify: mesh and geometry node counts differ");
    for (int s = 0; s < geom.n; ++s)
        if ((mesh.curve_nodes[s] - geom.nodes[s]).norm() > 1e-9)
            throw MeshCurveMismatch("verify: mesh was built from a different curve");
}

struct ResidualAccum {
    double max_abs = 0.0;
    double scale = 0.0;
    void add(double diff, double ref) {
        max_abs = std::max(max_abs, diff);
        scale = std::max(scale, ref);
    }
    IdentityResidual done(const std::string& name) const {
        IdentityResidual r;
        r.name = name;
        r.lhs_scale = scale;
        r.residual = max_abs / std::max(scale, 1.0);
        return r;
    }
};

}  // namespace

std::vector<IdentityResidual> verify_hopf_identities(const HopfTorusMesh& mesh,
                                                     const CurveGeometry& geom) {
    require_matching(mesh, geom);
    const int n = mesh.n;
    const int m = mesh.m;

    ResidualAccum mean_curv, tracefree, q_term, laplace, grad_w, fiber_var;
    for (int s = 0; s < n; ++s) {
        const double kappa = geom.kappa[s];
        const double kappa_ss = dot(geom.d2kappa[s], geom.normal[s]);
        const double a0_expect = 2.0 * (kappa * kappa + 1.0);
        double a0_min = std::numeric_limits<double>::max();
        double a0_max = -a0_min;
        for (int f = 0; f < m; ++f) {
            const std::size_t idx = mesh.index(s, f);
            const Quat& normal = mesh.normal[idx];

            mean_curv.add((mesh.mean_curv[idx] - 2.0 * kappa * normal).norm(),
                          std::abs(2.0 * kappa));
            tracefree.add(std::abs(mesh.a0_sq[idx] - a0_expect), a0_expect);
            const double q_expect = 4.0 * (kappa * kappa * kappa + kappa);
            q_term.add((mesh.q_a0_h[idx] - q_expect * normal).norm(), std::abs(q_expect));
            const double lap_expect = 8.0 * kappa_ss;
            laplace.add((mesh.laplace_h[idx] - lap_expect * normal).norm(),
                        std::abs(lap_expect));
            const double grad_expect =
                2.0 * (2.0 * kappa_ss + kappa * kappa * kappa + kappa);
            grad_w.add((mesh.will_grad[idx] - grad_expect * normal).norm(),
                       std::abs(grad_expect));
            a0_min = std::min(a0_min, mesh.a0_sq[idx]);
            a0_max = std::max(a0_max, mesh.a0_sq[idx]);
        }
        fiber_var.add(a0_max - a0_min, a0_expect);
    }

    std::vector<IdentityResidual> out;
    out.push_back(mean_curv.done("mean_curvature"));
    out.push_back(tracefree.done("tracefree_norm"));
    out.push_back(q_term.done("q_a0_h"));
    out.push_back(laplace.done("normal_laplace_h"));
    out.push_back(grad_w.done("willmore_gradient"));
    out.push_back(fiber_var.done("fiber_constancy"));

    const double curve_energy = elastic_energy(geom);
    IdentityResidual energy;
    energy.name = "willmore_energy";
    energy.lhs_scale = mesh.willmore;
    energy.residual = std::abs(mesh.willmore - kPi * curve_energy) / (kPi * curve_energy);
    out.push_back(energy);

    double surf_diss = 0.0;
    for (std::size_t idx = 0; idx < mesh.dmu.size(); ++idx) {
        const double a0sq = mesh.a0_sq[idx];
        surf_diss += mesh.will_grad[idx].norm_sq() / (a0sq * a0sq) * mesh.dmu[idx];
    }
    double curve_diss = 0.0;
    for (int s = 0; s < n; ++s) {
        const double k2 = geom.kappa[s] * geom.kappa[s];
        const Vec3 g = 2.0 * geom.d2kappa[s] + (k2 + 1.0) * geom.kappa_vec[s];
        curve_diss += g.norm_sq() / ((k2 + 1.0) * (k2 + 1.0)) * geom.dmu[s];
    }
    IdentityResidual diss;
    diss.name = "dissipation_identity";
    diss.lhs_scale = surf_diss;
    diss.residual = std::abs(surf_diss - kPi * curve_diss) / std::max(kPi * curve_diss, 1.0);
    out.push_back(diss);
    return out;
}

std::vector<IdentityResidual> verify_flow_correspondence(const HopfTorusMesh& mesh,
                                                         const CurveGeometry& geom) {
    require_matching(mesh, geom);
    const int n = mesh.n;
    const int m = mesh.m;

    ResidualAccum hopf_willmore, velocity_push;
    for (int s = 0; s < n; ++s) {
        const double k2 = geom.kappa[s] * geom.kappa[s];
        const Vec3 grad_e = 2.0 * geom.d2kappa[s] + (k2 + 1.0) * geom.kappa_vec[s];
        const Vec3 curve_vel = grad_e * (-1.0 / ((k2 + 1.0) * (k2 + 1.0)));
        for (int f = 0; f < m; ++f) {
            const std::size_t idx = mesh.index(s, f);
            const Quat& x = mesh.points[idx];
            const Quat& w = mesh.will_grad[idx];
            const Vec3 pushed = sphere_coords(involution(w) * x + involution(x) * w);
            hopf_willmore.add((pushed - 4.0 * grad_e).norm(), (4.0 * grad_e).norm());

            const double a0sq = mesh.a0_sq[idx];
            const Quat surf_vel = (-1.0 / (a0sq * a0sq)) * w;
            const Vec3 pushed_vel =
                sphere_coords(involution(surf_vel) * x + involution(x) * surf_vel);
            velocity_push.add((pushed_vel - curve_vel).norm(), curve_vel.norm());
        }
    }
    std::vector<IdentityResidual> out;
    out.push_back(hopf_willmore.done("hopf_willmore_identity"));
    out.push_back(velocity_push.done("velocity_correspondence"));
    return out;
}

}  // namespace hopfflow
