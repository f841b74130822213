#include "hopfflow/curve_family.hpp"

#include <cmath>
#include <random>

#include "hopfflow/energy.hpp"
#include "hopfflow/quat.hpp"

namespace hopfflow {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

DiscreteCurve latitude_circle(int n, double theta) {
    if (theta <= 0.0 || theta >= 3.14159265358979323846)
        throw Error("latitude_circle: theta must be in (0, pi)");
    NodeField nodes(n);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    for (int m = 0; m < n; ++m) {
        const double x = kTwoPi * m / n;
        nodes[m] = {ct, st * std::cos(x), st * std::sin(x)};
    }
    return DiscreteCurve::from_nodes(std::move(nodes));
}

DiscreteCurve great_circle(int n) { return latitude_circle(n, 0.5 * 3.14159265358979323846); }

DiscreteCurve perturbed_great_circle(int n, double eps, const std::vector<int>& modes,
                                     std::uint64_t seed) {
    if (modes.empty()) throw Error("perturbed_great_circle: empty mode list");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::vector<double> phases;
    phases.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) phases.push_back(phase(rng));

    NodeField nodes(n);
    for (int m = 0; m < n; ++m) {
        const double x = kTwoPi * m / n;
        // Mode amplitudes fall off like 1/k^2 so the curvature perturbation
        // stays of size eps and the declared families remain below energy 8.
        double u = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const int k = modes[i];
            u += std::cos(k * x + phases[i]) / (k * k);
        }
        const Vec3 base{0.0, std::cos(x), std::sin(x)};
        const Vec3 p = base + Vec3{eps * u, 0.0, 0.0};
        nodes[m] = p.normalized();
    }
    auto curve = DiscreteCurve::from_nodes(std::move(nodes));
    if (eps <= 0.1) {
        const double energy = elastic_energy(geometry(curve));
        if (energy >= 8.0)
            throw Error("perturbed_great_circle: declared family left the energy regime");
    }
    return curve;
}

DiscreteCurve lissajous_curve(int n, int freq_a, int freq_b, double phase, double amplitude) {
    NodeField nodes(n);
    for (int m = 0; m < n; ++m) {
        const double x = kTwoPi * m / n;
        const double u = amplitude * std::sin(freq_a * x + phase);
        const double v = amplitude * std::sin(freq_b * x);
        const double denom = 1.0 + u * u + v * v;
        // Inverse stereographic projection from (-1, 0, 0).
        nodes[m] = {(1.0 - u * u - v * v) / denom, 2.0 * u / denom, 2.0 * v / denom};
    }
    return DiscreteCurve::from_nodes(std::move(nodes));
}

DiscreteCurve random_embedded_curve(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> amp(0.03, 0.1);
    std::uniform_int_distribution<int> mode_count(1, 3);
    std::uniform_int_distribution<int> mode(2, 5);

    std::vector<int> modes;
    const int count = mode_count(rng);
    for (int i = 0; i < count; ++i) modes.push_back(mode(rng));
    DiscreteCurve curve = perturbed_great_circle(n, amp(rng), modes, rng());

    // Random rotation of the sphere.
    Quat r{unit(rng), unit(rng), unit(rng), unit(rng)};
    while (r.norm() < 1e-3) r = {unit(rng), unit(rng), unit(rng), unit(rng)};
    r = r.normalized();
    for (auto& p : curve.nodes) p = rotate_s2(p, r);
    return curve;
}

}  // namespace hopfflow
