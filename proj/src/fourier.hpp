#pragma once

// Internal FFTW-backed helpers for the spectral differentiation path.

#include <complex>
#include <vector>

namespace hopfflow::detail {

// Forward real DFT: c_k = sum_m f_m e^{-i k x_m}, k = 0..N/2.
std::vector<std::complex<double>> real_dft(const std::vector<double>& f);

// Inverse of real_dft (includes the 1/N normalization).
std::vector<double> real_idft(const std::vector<std::complex<double>>& c, int n);

// Spectral periodic derivative of the given order on [0, 2 pi).
std::vector<double> spectral_derivative(const std::vector<double>& f, int order);

}  // namespace hopfflow::detail
