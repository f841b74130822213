#include "fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace hopfflow::detail {
namespace {

// FFTW plan creation is not thread safe; plans are cached per size and the
// whole transform is serialized. Transform sizes here are small (N <= a few
// thousand), so the lock is uncontended in practice.
std::mutex g_fftw_mutex;

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    int n = 0;
};

PlanPair& plans_for(int n) {
    static std::map<int, PlanPair> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    PlanPair p;
    p.n = n;
    p.real_buf = fftw_alloc_real(n);
    p.cplx_buf = fftw_alloc_complex(n / 2 + 1);
    p.forward = fftw_plan_dft_r2c_1d(n, p.real_buf, p.cplx_buf, FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(n, p.cplx_buf, p.real_buf, FFTW_ESTIMATE);
    return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<std::complex<double>> real_dft(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    PlanPair& p = plans_for(n);
    for (int m = 0; m < n; ++m) p.real_buf[m] = f[m];
    fftw_execute(p.forward);
    std::vector<std::complex<double>> c(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k) c[k] = {p.cplx_buf[k][0], p.cplx_buf[k][1]};
    return c;
}

std::vector<double> real_idft(const std::vector<std::complex<double>>& c, int n) {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    PlanPair& p = plans_for(n);
    for (int k = 0; k <= n / 2; ++k) {
        p.cplx_buf[k][0] = c[k].real();
        p.cplx_buf[k][1] = c[k].imag();
    }
    fftw_execute(p.backward);
    std::vector<double> f(n);
    for (int m = 0; m < n; ++m) f[m] = p.real_buf[m] / n;
    return f;
}

std::vector<double> spectral_derivative(const std::vector<double>& f, int order) {
    const int n = static_cast<int>(f.size());
    auto c = real_dft(f);
    for (int k = 0; k <= n / 2; ++k) {
        std::complex<double> factor = std::pow(std::complex<double>(0.0, k), order);
        // The Nyquist mode of an odd derivative has no consistent sign; drop it.
        if (n % 2 == 0 && k == n / 2 && order % 2 == 1) factor = 0.0;
        c[k] *= factor;
    }
    return real_idft(c, n);
}

}  // namespace hopfflow::detail
