#pragma once

// Elastic energy E(gamma) = int (1 + kappa^2) dmu, its L^2 gradient along two
// independent routes, the extrinsic reformulation, enclosed area via
// Gauss-Bonnet and the a-priori inequalities as executable checks.

#include <optional>
#include <string>
#include <vector>

#include "hopfflow/curve.hpp"

namespace hopfflow {

struct BoundFinding {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // signed slack, >= 0 passes
    std::string note;
};

struct EnergyReport {
    double energy = 0.0;            // E = int 1 + kappa^2 dmu
    double length = 0.0;
    double total_curvature = 0.0;   // int kappa dmu (signed)
    double abs_curvature = 0.0;     // int |kappa| dmu
    double area = 0.0;              // 2 pi - int kappa dmu (left-hand domain)
    double sup_kappa = 0.0;
    NodeField gradient;             // covariant route, normal to T and gamma
    ScalarField dissipation_density;  // (kappa^2+1)^-2 |grad E|^2 per node
    double dissipation = 0.0;       // its quadrature
    double grad_l2 = 0.0;           // L^2(dmu) norm of the gradient
    double gradient_mutual_residual = 0.0;  // covariant vs expanded route
    std::optional<bool> embedded;   // set when the embedding test ran

    bool area_nominal() const { return !(embedded.has_value() && *embedded); }
};

double elastic_energy(const CurveGeometry& geom);

// int |second arclength derivative in R^3|^2 dmu; equals elastic_energy for
// spherical curves up to discretization error.
double extrinsic_energy(const CurveGeometry& geom);

// Covariant route: 2 (nabla^perp_s)^2 kappa_vec + (kappa^2 + 1) kappa_vec.
NodeField gradient(const CurveGeometry& geom);

// Expanded coordinate route built from plain arclength derivatives of the
// position only. The two routes agree to discretization order; the covariant
// one is treated as ground truth.
NodeField gradient_expanded(const CurveGeometry& geom);

double gradient_mutual_residual(const CurveGeometry& geom);

// Gauss-Bonnet area of the domain on the left of the curve. Throws
// NotEmbedded when require_embedded is set and the curve self-intersects.
double enclosed_area(const CurveGeometry& geom, bool require_embedded = true);

// Evaluates the length, curvature, Teufel and area inequalities; returns
// findings without aborting. Strict inequalities carry a 1e-9 slack.
std::vector<BoundFinding> check_bounds(const EnergyReport& report, double initial_energy);

// One-stop report used by the flow sampler and the CLI.
EnergyReport analyze(const DiscreteCurve& curve, DerivScheme scheme = DerivScheme::CentralDiff4,
                     bool check_embedded = true);
EnergyReport analyze(const DiscreteCurve& curve, const CurveGeometry& geom,
                     bool check_embedded = true);

}  // namespace hopfflow
