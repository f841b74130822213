#include "hopfflow/flow.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hopfflow {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

struct Candidate {
    DiscreteCurve curve;
    CurveGeometry geom;
    double energy = 0.0;
    double constraint_error = 0.0;
};

NodeField project_normal(const CurveGeometry& g, NodeField f) {
    for (int m = 0; m < g.n; ++m)
        f[m] = f[m] - dot(f[m], g.tangent[m]) * g.tangent[m] - dot(f[m], g.nodes[m]) * g.nodes[m];
    return f;
}

// Derivative matrix of the periodic scheme, cached per (n, scheme).
const Eigen::MatrixXd& derivative_matrix(int n, DerivScheme scheme) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, Eigen::MatrixXd> cache;
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_pair(n, static_cast<int>(scheme));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Eigen::MatrixXd d(n, n);
    ScalarField impulse(n, 0.0);
    for (int j = 0; j < n; ++j) {
        impulse[j] = 1.0;
        const ScalarField col = differentiate(impulse, 1, scheme);
        impulse[j] = 0.0;
        for (int i = 0; i < n; ++i) d(i, j) = col[i];
    }
    return cache.emplace(key, std::move(d)).first->second;
}

Candidate make_candidate(NodeField nodes, int orientation, DerivScheme scheme) {
    Candidate c;
    double cerr = 0.0;
    for (auto& p : nodes) {
        cerr = std::max(cerr, std::abs(p.norm() - 1.0));
        p = p.normalized();
    }
    c.constraint_error = cerr;
    c.curve.nodes = std::move(nodes);
    c.curve.orientation = orientation;
    c.geom = geometry(c.curve, scheme);
    c.energy = elastic_energy(c.geom);
    return c;
}

Candidate advance_rk4(const FlowState& state, const FlowConfig& config, double dt) {
    const int n = state.geom.n;
    auto stage_velocity = [&](const NodeField& base, const NodeField& k, double a) {
        NodeField nodes(n);
        for (int m = 0; m < n; ++m) nodes[m] = (base[m] + a * k[m]).normalized();
        DiscreteCurve c;
        c.nodes = std::move(nodes);
        c.orientation = state.curve.orientation;
        return velocity(geometry(c, config.deriv));
    };
    const NodeField& x = state.curve.nodes;
    const NodeField k1 = velocity(state.geom);
    const NodeField k2 = stage_velocity(x, k1, 0.5 * dt);
    const NodeField k3 = stage_velocity(x, k2, 0.5 * dt);
    const NodeField k4 = stage_velocity(x, k3, dt);
    NodeField out(n);
    for (int m = 0; m < n; ++m)
        out[m] = x[m] + (dt / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
    return make_candidate(std::move(out), state.curve.orientation, config.deriv);
}

// Linearly implicit step: the frozen-coefficient leading operator
// 2 (kappa^2+1)^-2 (d_s)^4 is treated implicitly at its nodal values, the
// remainder explicitly.
Candidate advance_imex(const FlowState& state, const FlowConfig& config, double dt) {
    const int n = state.geom.n;
    const CurveGeometry& g = state.geom;
    const Eigen::MatrixXd& d1 = derivative_matrix(n, config.deriv);

    Eigen::VectorXd inv_speed(n), stiff_coef(n);
    for (int m = 0; m < n; ++m) {
        inv_speed(m) = 1.0 / g.speed[m];
        const double k2 = g.kappa[m] * g.kappa[m];
        stiff_coef(m) = 2.0 / ((k2 + 1.0) * (k2 + 1.0));
    }
    const Eigen::MatrixXd ds = inv_speed.asDiagonal() * d1;
    const Eigen::MatrixXd ds2 = ds * ds;
    const Eigen::MatrixXd ds4 = ds2 * ds2;

    Eigen::MatrixXd a = dt * (stiff_coef.asDiagonal() * ds4);
    a.diagonal().array() += 1.0;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);

    const NodeField vel = velocity(g);
    Eigen::MatrixXd rhs(n, 3);
    Eigen::MatrixXd pos(n, 3);
    for (int m = 0; m < n; ++m) {
        pos(m, 0) = g.nodes[m].x;
        pos(m, 1) = g.nodes[m].y;
        pos(m, 2) = g.nodes[m].z;
    }
    const Eigen::MatrixXd stiff = stiff_coef.asDiagonal() * (ds4 * pos);
    for (int m = 0; m < n; ++m) {
        rhs(m, 0) = pos(m, 0) + dt * (vel[m].x + stiff(m, 0));
        rhs(m, 1) = pos(m, 1) + dt * (vel[m].y + stiff(m, 1));
        rhs(m, 2) = pos(m, 2) + dt * (vel[m].z + stiff(m, 2));
    }
    const Eigen::MatrixXd sol = lu.solve(rhs);
    NodeField out(n);
    for (int m = 0; m < n; ++m) out[m] = {sol(m, 0), sol(m, 1), sol(m, 2)};
    return make_candidate(std::move(out), state.curve.orientation, config.deriv);
}

double cfl_limit(const CurveGeometry& g, double cfl) {
    double factor = std::numeric_limits<double>::max();
    for (int m = 0; m < g.n; ++m) {
        const double k2 = g.kappa[m] * g.kappa[m];
        const double v4 = std::pow(g.speed[m], 4);
        factor = std::min(factor, (k2 + 1.0) * (k2 + 1.0) * v4);
    }
    return cfl * std::pow(g.h, 4) * factor;
}

FlowState sampled_state(double t, DiscreteCurve curve, CurveGeometry geom, StepStats stats) {
    FlowState s;
    s.t = t;
    s.report = analyze(curve, geom, /*check_embedded=*/true);
    s.curve = std::move(curve);
    s.geom = std::move(geom);
    s.stats = stats;
    return s;
}

}  // namespace

void FlowConfig::validate() const {
    if (n < 64) throw ConfigError("flow.n must be at least 64");
    if (dt <= 0 || dt_max <= 0) throw ConfigError("flow time steps must be positive");
    if (cfl <= 0) throw ConfigError("flow.cfl must be positive");
    if (reject_tol <= 0) throw ConfigError("flow.reject_tol must be positive");
    if (max_steps <= 0) throw ConfigError("flow.max_steps must be positive");
    if (sample_every < 1) throw ConfigError("flow.sample_every must be at least 1");
    if (resample_every < 0) throw ConfigError("flow.resample_every must be non-negative");
    if (stop_kappa_sup <= 0 || stop_grad_norm <= 0)
        throw ConfigError("flow stop thresholds must be positive");
    if (kappa_ceiling <= 0) throw ConfigError("flow.kappa_ceiling must be positive");
    if (max_halvings < 1) throw ConfigError("flow.max_halvings must be positive");
}

NodeField velocity(const CurveGeometry& geom) {
    NodeField v = gradient(geom);
    for (int m = 0; m < geom.n; ++m) {
        const double k2 = geom.kappa[m] * geom.kappa[m];
        v[m] = v[m] * (-1.0 / ((k2 + 1.0) * (k2 + 1.0)));
    }
    return project_normal(geom, std::move(v));
}

FlowState step(const FlowState& state, const FlowConfig& config) {
    const double base_energy = elastic_energy(state.geom);
    double dt = config.dt;

    int rejections = 0;
    while (true) {
        bool ok = true;
        Candidate cand;
        try {
            cand = (config.scheme == TimeScheme::Imex) ? advance_imex(state, config, dt)
                                                       : advance_rk4(state, config, dt);
            ok = cand.energy <= base_energy + config.reject_tol;
        } catch (const DegenerateCurve&) {
            ok = false;
        }
        if (ok) {
            FlowState next;
            next.t = state.t + dt;
            next.stats.dt = dt;
            next.stats.rejections = rejections;
            next.stats.constraint_error = cand.constraint_error;
            next.stats.sup_velocity = sup_norm(velocity(state.geom));
            next.report = analyze(cand.curve, cand.geom, /*check_embedded=*/false);
            next.curve = std::move(cand.curve);
            next.geom = std::move(cand.geom);
            next.resampled_since_last_sample = state.resampled_since_last_sample;
            return next;
        }
        ++rejections;
        if (rejections > config.max_halvings)
            throw StepFailure("step: energy still increasing after max dt halvings");
        dt *= 0.5;
    }
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::GreatCircle: return "great_circle";
        case StopReason::Stationary: return "stationary";
        case StopReason::MaxSteps: return "max_steps";
        case StopReason::SingularitySuspected: return "singularity_suspected";
        case StopReason::StepFailed: return "step_failure";
    }
    return "unknown";
}

Trajectory run(const DiscreteCurve& initial, const FlowConfig& config) {
    config.validate();
    if (static_cast<int>(initial.size()) < 64)
        throw ConfigError("run: need at least 64 nodes");

    Trajectory traj;
    DiscreteCurve curve = initial;
    CurveGeometry geom = geometry(curve, config.deriv);
    const double e0 = elastic_energy(geom);
    if (config.regime && e0 >= 8.0)
        throw RegimeViolation("run: initial elastic energy is not below 8");

    traj.samples.push_back(sampled_state(0.0, curve, geom, StepStats{}));

    FlowState state;
    state.t = 0.0;
    state.curve = std::move(curve);
    state.geom = std::move(geom);
    state.report = traj.samples.front().report;

    double dt = config.dt;
    long accepted = 0;
    int streak = 0;
    bool sampled_current = true;

    auto stop_check = [&](const FlowState& s) -> std::optional<StopReason> {
        const double grad = s.report.grad_l2;
        if (grad < config.stop_grad_norm) return StopReason::Stationary;
        const double sup_k = s.report.sup_kappa;
        if (sup_k < config.stop_kappa_sup &&
            s.report.energy - kTwoPi < config.stop_energy_delta)
            return StopReason::GreatCircle;
        if (sup_k > config.kappa_ceiling) return StopReason::SingularitySuspected;
        return std::nullopt;
    };

    StopReason reason = StopReason::MaxSteps;
    while (true) {
        if (auto stop = stop_check(state)) {
            reason = *stop;
            break;
        }
        if (accepted >= config.max_steps) {
            reason = StopReason::MaxSteps;
            break;
        }

        FlowConfig attempt = config;
        attempt.dt = dt;
        if (config.scheme == TimeScheme::Rk4)
            attempt.dt = std::min(attempt.dt, cfl_limit(state.geom, config.cfl));
        FlowState next;
        try {
            next = step(state, attempt);
        } catch (const StepFailure& e) {
            reason = StopReason::StepFailed;
            traj.message = e.what();
            break;
        }
        ++accepted;
        dt = next.stats.dt;
        if (config.adaptive) {
            if (next.stats.rejections == 0) {
                if (++streak >= 8) {
                    dt = std::min(dt * 1.25, config.dt_max);
                    streak = 0;
                }
            } else {
                streak = 0;
            }
        }

        if (config.resample_every > 0 && accepted % config.resample_every == 0) {
            DiscreteCurve resampled = resample_uniform_arclength(next.curve, config.deriv);
            next.curve = std::move(resampled);
            next.geom = geometry(next.curve, config.deriv);
            next.report = analyze(next.curve, next.geom, /*check_embedded=*/false);
            next.stats.resampled = true;
            next.resampled_since_last_sample = true;
        }

        state = std::move(next);
        sampled_current = false;
        if (accepted % config.sample_every == 0) {
            FlowState sample = sampled_state(state.t, state.curve, state.geom, state.stats);
            sample.resampled_since_last_sample = state.resampled_since_last_sample;
            traj.samples.push_back(std::move(sample));
            state.resampled_since_last_sample = false;
            sampled_current = true;
        }
    }

    if (!sampled_current) {
        FlowState sample = sampled_state(state.t, state.curve, state.geom, state.stats);
        sample.resampled_since_last_sample = state.resampled_since_last_sample;
        traj.samples.push_back(std::move(sample));
    }
    traj.reason = reason;
    traj.steps = accepted;
    traj.final_dt = dt;
    return traj;
}

namespace {

// Derivative at t_b from samples at t_a < t_b < t_c (nonuniform 3-point).
double centered_derivative(double fa, double fb, double fc, double ta, double tb, double tc) {
    const double dp = tc - tb;
    const double dm = tb - ta;
    return (dm * dm * fc + (dp * dp - dm * dm) * fb - dp * dp * fa) / (dp * dm * (dp + dm));
}

}  // namespace

std::vector<double> dissipation_residual(const Trajectory& traj) {
    const auto& s = traj.samples;
    if (s.size() < 3) throw Error("dissipation_residual: need at least 3 samples");
    std::vector<double> res;
    res.reserve(s.size() - 2);
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const double de = centered_derivative(s[k - 1].report.energy, s[k].report.energy,
                                              s[k + 1].report.energy, s[k - 1].t, s[k].t,
                                              s[k + 1].t);
        const double d = s[k].report.dissipation;
        const double denom = std::max(std::abs(d), 1e-12 * std::max(1.0, s[k].report.energy));
        res.push_back(std::abs(de + d) / denom);
    }
    return res;
}

std::vector<EvolutionResidual> curvature_evolution_residual(const Trajectory& traj) {
    const auto& s = traj.samples;
    if (s.size() < 3) throw Error("curvature_evolution_residual: need at least 3 samples");
    std::vector<EvolutionResidual> out;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const FlowState& a = s[k - 1];
        const FlowState& b = s[k];
        const FlowState& c = s[k + 1];
        if (b.resampled_since_last_sample || c.resampled_since_last_sample)
            throw ResampledBetweenSamples(
                "curvature_evolution_residual: node correspondence broken by resampling");
        if (a.geom.n != b.geom.n || b.geom.n != c.geom.n)
            throw ResampledBetweenSamples("curvature_evolution_residual: sample sizes differ");

        const int n = b.geom.n;
        const NodeField vel = velocity(b.geom);
        // (nabla_s^perp)^2 of the velocity field on the middle state.
        auto ds = [&](const NodeField& f) {
            NodeField d = differentiate(f, 1, b.geom.scheme);
            for (int m = 0; m < n; ++m) d[m] = d[m] / b.geom.speed[m];
            return d;
        };
        const NodeField dv = project_normal(b.geom, ds(vel));
        const NodeField d2v = project_normal(b.geom, ds(dv));

        EvolutionResidual r;
        double max_abs = 0.0, scale = 0.0;
        double dmu_abs = 0.0, dmu_scale = 0.0;
        for (int m = 0; m < n; ++m) {
            Vec3 dk{centered_derivative(a.geom.kappa_vec[m].x, b.geom.kappa_vec[m].x,
                                        c.geom.kappa_vec[m].x, a.t, b.t, c.t),
                    centered_derivative(a.geom.kappa_vec[m].y, b.geom.kappa_vec[m].y,
                                        c.geom.kappa_vec[m].y, a.t, b.t, c.t),
                    centered_derivative(a.geom.kappa_vec[m].z, b.geom.kappa_vec[m].z,
                                        c.geom.kappa_vec[m].z, a.t, b.t, c.t)};
            // Parallel-transport projection onto the middle normal space.
            dk = dk - dot(dk, b.geom.tangent[m]) * b.geom.tangent[m] -
                 dot(dk, b.geom.nodes[m]) * b.geom.nodes[m];
            const Vec3 rhs = d2v[m] + dot(vel[m], b.geom.kappa_vec[m]) * b.geom.kappa_vec[m] +
                             vel[m];
            max_abs = std::max(max_abs, (dk - rhs).norm());
            scale = std::max(scale, rhs.norm());

            const double dmu_dt = centered_derivative(a.geom.dmu[m], b.geom.dmu[m],
                                                      c.geom.dmu[m], a.t, b.t, c.t);
            const double dmu_rhs = -dot(vel[m], b.geom.kappa_vec[m]) * b.geom.dmu[m];
            dmu_abs = std::max(dmu_abs, std::abs(dmu_dt - dmu_rhs));
            dmu_scale = std::max(dmu_scale, std::abs(dmu_rhs));
        }
        r.kappa_max_rel = max_abs / std::max(scale, 1e-14);
        r.dmu_max_rel = dmu_abs / std::max(dmu_scale, 1e-14);
        out.push_back(r);
    }
    return out;
}

TailFit exponential_tail_fit(const Trajectory& traj, double floor_value) {
    std::vector<std::pair<double, double>> pts;  // (t, log(E - 2 pi))
    double smallest = std::numeric_limits<double>::max();
    for (const auto& s : traj.samples) {
        const double e = s.report.energy - kTwoPi;
        if (e > floor_value) smallest = std::min(smallest, e);
    }
    if (smallest == std::numeric_limits<double>::max()) return {};
    const double lo = smallest;
    const double hi = 10.0 * lo;
    for (const auto& s : traj.samples) {
        const double e = s.report.energy - kTwoPi;
        if (e >= lo && e <= hi) pts.emplace_back(s.t, std::log(e));
    }
    TailFit fit;
    fit.points = static_cast<int>(pts.size());
    if (pts.size() < 3) return fit;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto& [t, y] : pts) {
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * stt - st * st;
    if (std::abs(denom) < 1e-300) return fit;
    fit.rate = (n * sty - st * sy) / denom;
    const double intercept = (sy - fit.rate * st) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (auto& [t, y] : pts) {
        const double pred = intercept + fit.rate * t;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - mean) * (y - mean);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

}  // namespace hopfflow
