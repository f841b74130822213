#include "hopfflow/moduli.hpp"

#include <algorithm>
#include <cmath>

namespace hopfflow {
namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTieTol = 1e-13;

}  // namespace

std::complex<double> apply_word(std::complex<double> tau, const std::string& word) {
    for (char op : word) {
        switch (op) {
            case 'S': tau = -1.0 / tau; break;
            case 'T': tau += 1.0; break;
            case 'U': tau -= 1.0; break;
            default: throw Error(std::string("apply_word: unknown generator '") + op + "'");
        }
    }
    return tau;
}

ModulusPoint reduce_modulus(std::complex<double> tau) {
    if (tau.imag() <= 0.0) throw Error("reduce_modulus: Im tau must be positive");
    ModulusPoint p;
    p.tau = tau;
    std::string word;
    for (int iter = 0; iter < 256; ++iter) {
        // Center the real part in [-1/2, 1/2].
        while (tau.real() > 0.5 + kTieTol) {
            tau -= 1.0;
            word += 'U';
        }
        while (tau.real() < -0.5 - kTieTol) {
            tau += 1.0;
            word += 'T';
        }
        if (std::norm(tau) < 1.0 - kTieTol) {
            tau = -1.0 / tau;
            word += 'S';
            continue;
        }
        break;
    }
    // Boundary ties resolve toward Re >= 0.
    if (std::abs(tau.real() + 0.5) < kTieTol) {
        tau += 1.0;
        word += 'T';
    }
    if (std::abs(std::norm(tau) - 1.0) < kTieTol && tau.real() < -kTieTol) {
        tau = -1.0 / tau;
        word += 'S';
    }
    p.tau_reduced = tau;
    p.word = word;
    return p;
}

ModulusPoint modulus_from(double area, double length) {
    if (length <= 0.0) throw Error("modulus: length must be positive");
    return reduce_modulus({area / (4.0 * kPi), length / (4.0 * kPi)});
}

ModulusPoint modulus(const EnergyReport& report) {
    if (report.area_nominal())
        throw NotEmbedded("modulus: area undefined for non-embedded curve");
    return modulus_from(report.area, report.length);
}

std::vector<BoundFinding> compactness_monitor(const std::vector<ModulusPoint>& trajectory,
                                              double initial_energy) {
    if (initial_energy >= 8.0)
        throw RegimeViolation("compactness_monitor: initial energy must be below 8");
    const double slack = 1e-9;
    const double im_lo = 0.25;
    const double im_hi = initial_energy / (4.0 * kPi);
    // Reduction can raise Im tau at most to max(Im tau, 1/Im tau).
    const double red_hi = std::max(im_hi, 1.0 / im_lo);
    const double red_lo = std::sqrt(3.0) / 2.0;

    double min_im = std::numeric_limits<double>::max(), max_im = 0.0;
    double min_red = std::numeric_limits<double>::max(), max_red = 0.0;
    bool raw_ok = true, red_ok = true;
    for (const auto& p : trajectory) {
        const double im = p.tau.imag();
        const double red = p.tau_reduced.imag();
        min_im = std::min(min_im, im);
        max_im = std::max(max_im, im);
        min_red = std::min(min_red, red);
        max_red = std::max(max_red, red);
        raw_ok = raw_ok && im >= im_lo - slack && im <= im_hi + slack;
        red_ok = red_ok && red >= red_lo - slack && red <= red_hi + slack &&
                 std::abs(p.tau_reduced.real()) <= 0.5 + slack;
    }

    std::vector<BoundFinding> findings;
    BoundFinding raw;
    raw.name = "raw_im_tau_in_regime_band";
    raw.pass = raw_ok;
    raw.lhs = min_im;
    raw.rhs = max_im;
    raw.margin = std::min(min_im - im_lo, im_hi - max_im);
    raw.note = "band [" + std::to_string(im_lo) + ", " + std::to_string(im_hi) + "]";
    findings.push_back(raw);

    BoundFinding red;
    red.name = "reduced_tau_in_compact_box";
    red.pass = red_ok;
    red.lhs = min_red;
    red.rhs = max_red;
    red.margin = std::min(min_red - red_lo, red_hi - max_red);
    red.note = "Im box [" + std::to_string(red_lo) + ", " + std::to_string(red_hi) + "]";
    findings.push_back(red);
    return findings;
}

}  // namespace hopfflow
