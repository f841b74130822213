#pragma once

// Time integration of the degenerate elastic-energy flow
//   d/dt gamma = -(kappa^2+1)^-2 grad E(gamma),
// dissipation accounting, evolution-identity residuals and convergence
// detection.

#include <string>
#include <vector>

#include "hopfflow/energy.hpp"

namespace hopfflow {

enum class TimeScheme { Imex, Rk4 };

struct FlowConfig {
    int n = 256;
    TimeScheme scheme = TimeScheme::Imex;
    DerivScheme deriv = DerivScheme::CentralDiff4;

    double dt = 1e-5;        // initial step
    double dt_max = 1e-2;    // adaptive ceiling
    double cfl = 0.08;       // explicit stability constant (dt ~ cfl h^4 ...)
    bool adaptive = true;
    double reject_tol = 1e-10;  // tolerated energy increase per step
    int max_halvings = 45;

    int resample_every = 25;    // accepted steps between redistributions, 0 = off
    long max_steps = 200000;

    double stop_kappa_sup = 1e-4;     // great-circle criterion, with ...
    double stop_energy_delta = 1e-6;  // ... E - 2 pi below this
    double stop_grad_norm = 1e-8;     // stationarity criterion
    double kappa_ceiling = 50.0;      // blow-up watch
    bool regime = true;               // expect E_0 < 8

    int sample_every = 20;  // accepted steps between trajectory samples

    void validate() const;  // throws ConfigError
};

struct StepStats {
    double dt = 0.0;              // step actually taken
    double sup_velocity = 0.0;
    double constraint_error = 0.0;  // max ||node| - 1| before projection
    int rejections = 0;
    bool resampled = false;       // redistribution applied after this step
};

struct FlowState {
    double t = 0.0;
    DiscreteCurve curve;
    CurveGeometry geom;
    EnergyReport report;
    StepStats stats;
    bool resampled_since_last_sample = false;
};

// Flow velocity -(kappa^2+1)^-2 grad E, normal to T and gamma.
NodeField velocity(const CurveGeometry& geom);

// One accepted step: advances by the configured scheme, re-projects nodes to
// the sphere, rejects and halves dt on energy increase beyond tolerance.
// Throws StepFailure after max_halvings.
FlowState step(const FlowState& state, const FlowConfig& config);

enum class StopReason { GreatCircle, Stationary, MaxSteps, SingularitySuspected, StepFailed };

std::string to_string(StopReason reason);

struct Trajectory {
    std::vector<FlowState> samples;  // includes initial and final states
    StopReason reason = StopReason::MaxSteps;
    long steps = 0;
    std::string message;
    double final_dt = 0.0;
};

// Integrates until a stop criterion, step failure or max_steps. Samples carry
// full energy reports (with the embedding check).
Trajectory run(const DiscreteCurve& initial, const FlowConfig& config);

// Relative residual of dE/dt = -int (kappa^2+1)^-2 |grad E|^2 dmu per
// interior sample (centered difference in time, nonuniform safe).
std::vector<double> dissipation_residual(const Trajectory& traj);

struct EvolutionResidual {
    double kappa_max_rel = 0.0;  // curvature evolution identity
    double dmu_max_rel = 0.0;    // arclength element identity
};

// Residuals of the curvature-vector and arclength evolution identities over
// each interior sample triple. Requires matched node correspondence; throws
// ResampledBetweenSamples if redistribution happened between samples.
std::vector<EvolutionResidual> curvature_evolution_residual(const Trajectory& traj);

struct TailFit {
    double rate = 0.0;  // slope of log(E - 2 pi) vs t
    double r2 = 0.0;
    int points = 0;
};

// Least-squares line through log(E(t) - 2 pi) over the last decade of
// samples above the given floor.
TailFit exponential_tail_fit(const Trajectory& traj, double floor_value);

}  // namespace hopfflow
