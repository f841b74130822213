#pragma once

// Initial-curve constructors: latitude circles, perturbed great circles,
// self-intersecting Lissajous curves for negative tests.

#include <cstdint>
#include <vector>

#include "hopfflow/curve.hpp"

namespace hopfflow {

// Circle at polar angle theta from the pole (1,0,0):
// gamma(x) = (cos theta, sin theta cos x, sin theta sin x).
DiscreteCurve latitude_circle(int n, double theta);

// Exact great circle through (0,1,0), (0,0,1) (the theta = pi/2 latitude).
DiscreteCurve great_circle(int n);

// Equator plus a normal perturbation eps * sum_m c_m(x) toward (1,0,0),
// re-projected to the sphere. Mode-m amplitudes are scaled by 1/m^2 so the
// declared eps <= 0.1, modes <= 5 family stays below elastic energy 8
// (asserted at construction). Random phases from the seed.
DiscreteCurve perturbed_great_circle(int n, double eps, const std::vector<int>& modes,
                                     std::uint64_t seed);

// Spherical Lissajous figure: the planar curve
// a (sin(p x + phase), sin(q x)) lifted by inverse stereographic projection.
// The default (p, q) = (2, 1) is a figure-eight with one crossing.
DiscreteCurve lissajous_curve(int n, int freq_a = 2, int freq_b = 1, double phase = 0.0,
                              double amplitude = 0.9);

// Seeded smooth embedded test curve: perturbed great circle composed with a
// random rotation of the sphere.
DiscreteCurve random_embedded_curve(int n, std::uint64_t seed);

}  // namespace hopfflow
