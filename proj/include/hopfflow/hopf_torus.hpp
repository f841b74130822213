#pragma once

// Horizontal lifts of profile curves, Hopf-torus meshes in S^3, direct
// surface differential geometry, and the curve <-> surface identity checks.

#include <string>
#include <vector>

#include "hopfflow/curve.hpp"
#include "hopfflow/quat.hpp"

namespace hopfflow {

struct HorizontalLift {
    std::vector<Quat> eta;   // lift values at the curve nodes
    Quat seed;               // start value q*
    // Fiber phase closing the lift loop: e^{i holonomy} eta(end) = eta(start).
    // Equals A/2 mod 2 pi for the left-hand enclosed area A.
    double holonomy = 0.0;
    // Raw end phase delta with eta(end) = e^{i delta} eta(start); the seam
    // twist of the mesh. holonomy = -raw_end_phase mod 2 pi.
    double raw_end_phase = 0.0;
    double fiber_residual = 0.0;          // max |pi(eta_m) - gamma_m|
    double horizontality_residual = 0.0;  // max |<eta', i eta>|

    NodeField curve_nodes;  // source curve, kept for mesh construction
    int curve_orientation = +1;
    DerivScheme scheme = DerivScheme::CentralDiff4;
};

// Integrates the lift ODE eta' = 1/2 conj(eta)~ gamma' node to node with a
// 4th-order one-step method. The seed must project onto the first node.
HorizontalLift horizontal_lift(const DiscreteCurve& curve, const Quat& seed,
                               DerivScheme scheme = DerivScheme::CentralDiff4);

struct HopfTorusMesh {
    int n = 0;  // profile resolution (rows, s direction)
    int m = 0;  // fiber resolution (columns, phi direction)
    double raw_end_phase = 0.0;  // twist for the s-direction seam
    std::vector<Quat> points;    // row-major: points[s * m + phi]

    NodeField curve_nodes;    // profile curve and its normals, for alignment
    NodeField curve_normals;
    int curve_orientation = +1;

    bool has_geometry = false;
    // First fundamental form and area element.
    ScalarField g11, g12, g22, det_g, dmu;
    // Unit normal in TS^3, aligned with the lift of the curve normal.
    std::vector<Quat> normal;
    // Second fundamental form (S^3-valued convention), scalar coefficients
    // <X_ij, N>; the R^4 convention differs by -X g_ij.
    ScalarField a11, a12, a22;
    ScalarField h_scalar;   // trace, so H = h_scalar * N
    ScalarField a0_sq;      // |A^0|^2
    std::vector<Quat> mean_curv;   // H as an R^4 vector field
    std::vector<Quat> laplace_h;   // normal Beltrami-Laplacian of H
    std::vector<Quat> q_a0_h;      // Q(A^0)(H)
    std::vector<Quat> will_grad;   // 1/2 (laplace_h + q_a0_h)
    double area = 0.0;
    double willmore = 0.0;  // int 1 + |H|^2/4 dmu

    std::size_t index(int s, int phi) const { return static_cast<std::size_t>(s) * m + phi; }
    // Grid value with holonomy-twisted wraparound in s and periodic phi.
    Quat point(int s, int phi) const;

    // Ambient-R^4 convention: A_R4 = A_S3 - X g, H_R4 = H_S3 - 2X.
    Quat mean_curv_r4(std::size_t idx) const { return mean_curv[idx] - 2.0 * points[idx]; }
    Quat second_fundamental_r4(std::size_t idx, int k, int l) const {
        const double a = (k == 0 && l == 0) ? a11[idx] : (k == 1 && l == 1) ? a22[idx] : a12[idx];
        const double g = (k == 0 && l == 0) ? g11[idx] : (k == 1 && l == 1) ? g22[idx] : g12[idx];
        return a * normal[idx] - g * points[idx];
    }
};

// Populates the (s, phi) grid X = e^{i phi} eta(s); fiber closure handled via
// the holonomy twist.
HopfTorusMesh build_torus(const HorizontalLift& lift, int fiber_res);

// Direct discrete differential geometry in ambient S^3: metric, normal,
// second fundamental form, tracefree part, normal Laplacian of H, Q(A^0)(H),
// Willmore gradient and energy. Throws DegenerateMetric.
void surface_geometry(HopfTorusMesh& mesh);

struct IdentityResidual {
    std::string name;
    double residual = 0.0;    // max relative residual over the grid
    double lhs_scale = 0.0;
};

// Residuals of the pointwise and integrated Hopf-torus identities:
// H = 2 kappa N, |A^0|^2 = 2(kappa^2+1), Q(A^0)(H) = 4(kappa^3+kappa) N,
// laplace_h = 8 kappa_ss N, grad W = 2(2 kappa_ss + kappa^3 + kappa) N,
// W = pi E, and the dissipation-density correspondence.
std::vector<IdentityResidual> verify_hopf_identities(const HopfTorusMesh& mesh,
                                                     const CurveGeometry& geom);

// Checks Dpi(grad W) = 4 grad E along the lift, and that the pushed-forward
// surface velocity -|A^0|^-4 grad W equals the curve velocity.
std::vector<IdentityResidual> verify_flow_correspondence(const HopfTorusMesh& mesh,
                                                         const CurveGeometry& geom);

}  // namespace hopfflow
