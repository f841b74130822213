#pragma once

// Discrete closed curves on S^2 and their differential geometry: periodic
// differentiation, arclength data, curvature vector, signed curvature and
// iterated normal covariant derivatives.

#include <optional>
#include <vector>

#include "hopfflow/errors.hpp"
#include "hopfflow/vec3.hpp"

namespace hopfflow {

// Periodic differentiation backend. CentralDiff4 is the default, dependency
// light path; Spectral gives trigonometric (Fourier) accuracy for
// convergence studies.
enum class DerivScheme { CentralDiff4, Spectral };

// Quasi-uniformity threshold on max/min chord ratio. Exceeding it is a
// warning, not an error; the flow decides on resampling.
inline constexpr double kChordRatioWarn = 10.0;

struct DiscreteCurve {
    NodeField nodes;         // unit vectors, uniform parameter x_m = 2 pi m / N
    int orientation = +1;    // traversal sense flag
    bool quasi_uniform_warning = false;

    std::size_t size() const { return nodes.size(); }

    // Validates unit norms (within 1e-9, then renormalizes exactly),
    // positive chords, and flags strong non-uniformity.
    static DiscreteCurve from_nodes(NodeField nodes, int orientation = +1);

    DiscreteCurve reversed() const;
};

// Periodic derivative of a node sequence with respect to the uniform
// parameter on [0, 2 pi). order in {1,2,3,4}; throws TooCoarse for N < 16.
ScalarField differentiate(const ScalarField& values, int order, DerivScheme scheme);
NodeField differentiate(const NodeField& values, int order, DerivScheme scheme);

struct CurveGeometry {
    DerivScheme scheme = DerivScheme::CentralDiff4;
    int n = 0;
    double h = 0.0;          // parameter step 2 pi / N
    double length = 0.0;

    NodeField nodes;
    ScalarField speed;       // |gamma'|
    ScalarField dmu;         // arclength weights speed * h
    NodeField tangent;       // unit tangent T
    NodeField normal;        // nu = gamma x T
    NodeField kappa_vec;     // curvature vector
    ScalarField kappa;       // signed curvature <kappa_vec, nu>
    NodeField dkappa;        // nabla^perp_s kappa_vec
    NodeField d2kappa;       // (nabla^perp_s)^2 kappa_vec
    NodeField d3kappa;       // (nabla^perp_s)^3 kappa_vec

    // Plain arclength derivatives of the position, kept for the expanded
    // gradient route and the extrinsic energy.
    NodeField ds2, ds4;

    double sup_kappa() const { return sup_abs(kappa); }
};

// Full per-node geometry; throws DegenerateCurve if the speed underflows.
CurveGeometry geometry(const DiscreteCurve& curve, DerivScheme scheme = DerivScheme::CentralDiff4);

// Pairwise geodesic-segment intersection test (O(N^2)); indices of the first
// crossing pair of non-adjacent segments, or nullopt when embedded.
struct CrossingPair {
    int seg_a = -1;
    int seg_b = -1;
};
std::optional<CrossingPair> first_crossing(const DiscreteCurve& curve);
bool is_embedded(const DiscreteCurve& curve);

// Same trace, node spacing equalized in arclength (node 0 stays anchored).
DiscreteCurve resample_uniform_arclength(const DiscreteCurve& curve,
                                         DerivScheme scheme = DerivScheme::CentralDiff4);

// Periodic interpolation of node data on the uniform grid: 6-point Lagrange
// for the stencil scheme, trigonometric for the spectral one.
class PeriodicInterp {
  public:
    PeriodicInterp(NodeField values, DerivScheme scheme);
    Vec3 operator()(double x) const;

  private:
    NodeField values_;
    NodeField cos_coef_, sin_coef_;  // spectral coefficients per mode
    DerivScheme scheme_;
    int n_ = 0;
    double h_ = 0.0;
};

}  // namespace hopfflow
