#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfflow/curve_family.hpp"
#include "hopfflow/moduli.hpp"

using namespace hopfflow;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("modulus: great circle reduces to i") {
    const auto p = modulus_from(2 * kPi, 2 * kPi);  // tau = 1/2 + i/2
    CHECK(std::abs(p.tau - std::complex<double>(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(p.tau_reduced - std::complex<double>(0.0, 1.0)) < 1e-12);
    CHECK(p.word == "ST");
}

TEST_CASE("modulus: latitude pi/3 reduces to i sqrt(3)") {
    const double theta = kPi / 3;
    const double area = 2 * kPi * (1 - std::cos(theta));
    const double length = 2 * kPi * std::sin(theta);
    const auto p = modulus_from(area, length);
    CHECK(std::abs(p.tau - std::complex<double>(0.25, std::sqrt(3.0) / 4)) < 1e-12);
    CHECK(std::abs(p.tau_reduced - std::complex<double>(0.0, std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("modulus from discrete curves") {
    const auto gc = analyze(great_circle(256), DerivScheme::Spectral);
    CHECK(std::abs(modulus(gc).tau_reduced - std::complex<double>(0, 1)) < 1e-9);

    const auto lat = analyze(latitude_circle(256, kPi / 3), DerivScheme::Spectral);
    CHECK(std::abs(modulus(lat).tau_reduced - std::complex<double>(0, std::sqrt(3.0))) < 1e-9);

    CHECK_THROWS_AS(modulus(analyze(lissajous_curve(128))), NotEmbedded);
}

TEST_CASE("reduction word reproduces the reduced point; idempotence") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(-3.0, 3.0);
    std::uniform_real_distribution<double> im(0.05, 2.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::complex<double> tau{re(rng), im(rng)};
        const auto p = reduce_modulus(tau);
        CHECK(std::abs(apply_word(tau, p.word) - p.tau_reduced) < 1e-12);
        CHECK(p.tau_reduced.imag() >= std::sqrt(3.0) / 2 - 1e-12);
        CHECK(std::abs(p.tau_reduced.real()) <= 0.5 + 1e-12);
        CHECK(std::norm(p.tau_reduced) >= 1.0 - 1e-12);

        const auto again = reduce_modulus(p.tau_reduced);
        CHECK(again.word.empty());
        CHECK(std::abs(again.tau_reduced - p.tau_reduced) < 1e-14);
    }
}

TEST_CASE("reduction is invariant on PSL(2,Z) orbits") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> re(-0.45, 0.45);
    std::uniform_real_distribution<double> im(0.9, 2.0);
    std::uniform_int_distribution<int> gen(0, 2);
    std::uniform_int_distribution<int> len(1, 6);
    const char ops[3] = {'S', 'T', 'U'};
    for (int trial = 0; trial < 200; ++trial) {
        const std::complex<double> tau{re(rng), im(rng)};
        std::string word;
        const int L = len(rng);
        for (int i = 0; i < L; ++i) word += ops[gen(rng)];
        const std::complex<double> moved = apply_word(tau, word);
        const auto a = reduce_modulus(tau);
        const auto b = reduce_modulus(moved);
        CHECK(std::abs(a.tau_reduced - b.tau_reduced) < 1e-10);
    }
}

TEST_CASE("compactness monitor") {
    const double e0 = 7.2552;
    std::vector<ModulusPoint> good;
    for (double length = 2 * kPi * std::sin(kPi / 3); length < 2 * kPi; length += 0.1)
        good.push_back(modulus_from(kPi, length));
    good.push_back(modulus_from(2 * kPi, 2 * kPi));
    for (const auto& f : compactness_monitor(good, e0)) CHECK(f.pass);

    // Fixed point: the great circle stays at tau* = i.
    std::vector<ModulusPoint> fixed(5, modulus_from(2 * kPi, 2 * kPi));
    for (const auto& p : fixed)
        CHECK(std::abs(p.tau_reduced - std::complex<double>(0, 1)) < 1e-12);

    // Adversarial short curve violates the band.
    std::vector<ModulusPoint> bad = {modulus_from(1.0, 0.1)};
    bool any_fail = false;
    for (const auto& f : compactness_monitor(bad, e0)) any_fail = any_fail || !f.pass;
    CHECK(any_fail);

    CHECK_THROWS_AS(compactness_monitor(good, 9.0), RegimeViolation);
}
