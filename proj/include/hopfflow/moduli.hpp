#pragma once

// Conformal class of the Hopf torus over a closed curve: the abstract
// lattice gives tau = A/(4 pi) + i L/(4 pi); reduction into the standard
// PSL(2,Z) fundamental domain with the generator word recorded.

#include <complex>
#include <string>
#include <vector>

#include "hopfflow/energy.hpp"

namespace hopfflow {

struct ModulusPoint {
    std::complex<double> tau;          // raw modulus, Im > 0
    std::complex<double> tau_reduced;  // representative in |Re| <= 1/2, |tau| >= 1
    std::string word;                  // generators applied in order: S, T (+1), U (-1)
};

// Applies a generator word to tau, left to right.
std::complex<double> apply_word(std::complex<double> tau, const std::string& word);

// Reduction into the fundamental domain; ties on the boundary resolved
// toward Re >= 0.
ModulusPoint reduce_modulus(std::complex<double> tau);

// Modulus from area and length; Im tau = L/(4 pi) must be positive.
ModulusPoint modulus_from(double area, double length);

// Modulus of a curve's report; throws NotEmbedded when the report says the
// area is nominal.
ModulusPoint modulus(const EnergyReport& report);

// Checks that raw Im tau stays in [1/4, E0/(4 pi)] and that the reduced
// point never exits the compact box implied by those bounds. Throws
// RegimeViolation if E0 >= 8.
std::vector<BoundFinding> compactness_monitor(const std::vector<ModulusPoint>& trajectory,
                                              double initial_energy);

}  // namespace hopfflow
