// Thin FFTW wrapper with per-size plan caching.
#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace critns::fft {

// FFTW planning mutates global state; guard plan creation.  Execution with
// fftw_execute_dft on distinct arrays is thread-safe.
inline std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

inline PlanPair& plans_3d(int n) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n) * n * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.bwd = fftw_plan_dft_3d(n, n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(n, pp).first->second;
}

inline PlanPair& plans_1d(int n) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    pp.bwd = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    return cache.emplace(n, pp).first->second;
}

/// In-place forward DFT, unscaled.
inline void forward_3d(int n, std::complex<double>* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_3d(n).fwd, p, p);
}

/// In-place backward DFT, unscaled (caller divides by n^3).
inline void backward_3d(int n, std::complex<double>* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_3d(n).bwd, p, p);
}

inline void forward_1d(int n, std::complex<double>* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_1d(n).fwd, p, p);
}

inline void backward_1d(int n, std::complex<double>* data) {
    auto* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plans_1d(n).bwd, p, p);
}

/// Integer wavevector for DFT bin i on an n-point axis, in [-n/2, n/2).
inline int wavenumber(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace critns::fft
