// Spectral representation and the operator substrate: derivatives,
// Leray projection, Riesz transforms, pressure recovery.
//
// Transform convention: forward unscaled, inverse divided by n^3.
// Wavevectors are integers k in [-n/2, n/2)^3; the physical multiplier of
// d/dx_a is i (pi/L) k_a on the box [-L, L)^3.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "critns/fft.hpp"
#include "critns/grid.hpp"

namespace critns {

struct SpectralRep {
    Grid3 grid;
    std::vector<std::complex<double>> coeff;  ///< x-fastest, DFT bin order

    SpectralRep() = default;
    explicit SpectralRep(const Grid3& g) : grid(g), coeff(g.size()) {}

    std::complex<double>& at(int i, int j, int k) { return coeff[grid.index(i, j, k)]; }
    std::complex<double> at(int i, int j, int k) const { return coeff[grid.index(i, j, k)]; }
};

inline SpectralRep transform(const ScalarField& f) {
    f.grid.validate();
    SpectralRep s(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) s.coeff[i] = f.values[i];
    fft::forward_3d(f.grid.n, s.coeff.data());
    return s;
}

inline ScalarField inverse_transform(const SpectralRep& s) {
    s.grid.validate();
    std::vector<std::complex<double>> work(s.coeff);
    fft::backward_3d(s.grid.n, work.data());
    ScalarField f(s.grid);
    const double scale = 1.0 / static_cast<double>(s.grid.size());
    for (std::size_t i = 0; i < work.size(); ++i) f.values[i] = work[i].real() * scale;
    return f;
}

/// Applies fn(kx, ky, kz, coeff) over all bins; k are integer wavevectors.
template <class Fn>
void for_each_mode(SpectralRep& s, Fn&& fn) {
    const int n = s.grid.n;
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        int kz = fft::wavenumber(k, n);
        for (int j = 0; j < n; ++j) {
            int ky = fft::wavenumber(j, n);
            for (int i = 0; i < n; ++i, ++idx) {
                int kx = fft::wavenumber(i, n);
                fn(kx, ky, kz, s.coeff[idx]);
            }
        }
    }
}

/// Zeroes the Nyquist planes |k_a| = n/2.  Odd-symmetry multipliers (first
/// derivatives, Riesz kernels, the projection cross terms) have no Hermitian
/// partner on those planes, so keeping them would leak imaginary parts into
/// real fields; the conventional fix is to drop them.
inline void zero_nyquist(SpectralRep& s) {
    const int half = s.grid.n / 2;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        if (std::abs(kx) == half || std::abs(ky) == half || std::abs(kz) == half)
            c = 0.0;
    });
}

inline ScalarField drop_nyquist(const ScalarField& f) {
    SpectralRep s = transform(f);
    zero_nyquist(s);
    return inverse_transform(s);
}

/// Spectral partial derivative along axis a, in coefficient space.
inline SpectralRep derivative(const SpectralRep& in, int axis) {
    SpectralRep s = in;
    const double kb = M_PI / s.grid.half_width;
    const int half = s.grid.n / 2;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        if (std::abs(kx) == half || std::abs(ky) == half || std::abs(kz) == half) {
            c = 0.0;
            return;
        }
        int k[3] = {kx, ky, kz};
        c *= std::complex<double>(0.0, kb * k[axis]);
    });
    return s;
}

/// Spectral partial derivative along axis a.
inline ScalarField derivative(const ScalarField& f, int axis) {
    return inverse_transform(derivative(transform(f), axis));
}

inline VectorField gradient(const ScalarField& f) {
    VectorField g(f.grid);
    for (int a = 0; a < 3; ++a) g[a] = derivative(f, a);
    return g;
}

inline ScalarField divergence(const VectorField& v) {
    v.check();
    ScalarField d(v.grid);
    for (int a = 0; a < 3; ++a) d += derivative(v[a], a);
    return d;
}

inline ScalarField laplacian(const ScalarField& f) {
    SpectralRep s = transform(f);
    const double kb = M_PI / f.grid.half_width;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        double k2 = kb * kb * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        c *= -k2;
    });
    return inverse_transform(s);
}

inline VectorField curl(const VectorField& v) {
    VectorField w(v.grid);
    w[0] = derivative(v[2], 1) - derivative(v[1], 2);
    w[1] = derivative(v[0], 2) - derivative(v[2], 0);
    w[2] = derivative(v[1], 0) - derivative(v[0], 1);
    return w;
}

/// Leray projection on spectral components: u_i = v_i - k_i k_j v_j / |k|^2,
/// k = 0 mode passed through (mean flow is divergence-free).
inline void leray_project(std::array<SpectralRep, 3>& s) {
    const int n = s[0].grid.n;
    for (int a = 0; a < 3; ++a) zero_nyquist(s[a]);
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        double kz = fft::wavenumber(k, n);
        for (int j = 0; j < n; ++j) {
            double ky = fft::wavenumber(j, n);
            for (int i = 0; i < n; ++i, ++idx) {
                double kx = fft::wavenumber(i, n);
                double k2 = kx * kx + ky * ky + kz * kz;
                if (k2 == 0.0) continue;
                std::complex<double> kd =
                    (kx * s[0].coeff[idx] + ky * s[1].coeff[idx] + kz * s[2].coeff[idx]) / k2;
                s[0].coeff[idx] -= kx * kd;
                s[1].coeff[idx] -= ky * kd;
                s[2].coeff[idx] -= kz * kd;
            }
        }
    }
}

inline VectorField leray_project(const VectorField& v) {
    v.check();
    SpectralRep s[3] = {transform(v[0]), transform(v[1]), transform(v[2])};
    for (int a = 0; a < 3; ++a) zero_nyquist(s[a]);
    const int n = v.grid.n;
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        double kz = fft::wavenumber(k, n);
        for (int j = 0; j < n; ++j) {
            double ky = fft::wavenumber(j, n);
            for (int i = 0; i < n; ++i, ++idx) {
                double kx = fft::wavenumber(i, n);
                double k2 = kx * kx + ky * ky + kz * kz;
                if (k2 == 0.0) continue;
                std::complex<double> kd =
                    (kx * s[0].coeff[idx] + ky * s[1].coeff[idx] + kz * s[2].coeff[idx]) / k2;
                s[0].coeff[idx] -= kx * kd;
                s[1].coeff[idx] -= ky * kd;
                s[2].coeff[idx] -= kz * kd;
            }
        }
    }
    VectorField u(v.grid);
    for (int a = 0; a < 3; ++a) u[a] = inverse_transform(s[a]);
    return u;
}

/// Riesz transform R_a: multiplier -i k_a / |k|, zero mode set to zero.
inline ScalarField riesz_transform(int axis, const ScalarField& f) {
    SpectralRep s = transform(f);
    zero_nyquist(s);
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        double k[3] = {double(kx), double(ky), double(kz)};
        double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        if (kn == 0.0) {
            c = 0.0;
        } else {
            c *= std::complex<double>(0.0, -k[axis] / kn);
        }
    });
    return inverse_transform(s);
}

/// Solves -Delta p = rhs spectrally with zero mean (zero mode dropped).
inline ScalarField inverse_neg_laplacian(const ScalarField& rhs) {
    SpectralRep s = transform(rhs);
    const double kb = M_PI / rhs.grid.half_width;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        double k2 = kb * kb * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
        c = (k2 == 0.0) ? 0.0 : c / k2;
    });
    return inverse_transform(s);
}

/// Pressure from velocity on the periodic box: -Delta P = d_i d_j (u_i u_j),
/// zero mean.  If div_max_out is given it receives max|div u|; the result is
/// defined regardless, callers decide whether to warn.
inline ScalarField pressure_from_velocity(const VectorField& u, double* div_max_out = nullptr) {
    u.check();
    if (div_max_out) *div_max_out = divergence(u).max_abs();
    ScalarField rhs(u.grid);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            ScalarField prod(u.grid);
            for (std::size_t i = 0; i < prod.values.size(); ++i)
                prod.values[i] = u[a].values[i] * u[b].values[i];
            rhs += derivative(derivative(prod, a), b);
        }
    return inverse_neg_laplacian(rhs);
}

/// Grid L2 norm, h^3-weighted; matches the spectral l2 norm by Parseval.
inline double l2_norm(const ScalarField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.cell_volume());
}

inline double l2_norm(const VectorField& u) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c)
        for (double v : u[c].values) s += v * v;
    return std::sqrt(s * u.grid.cell_volume());
}

/// L2 norm of the spectral gradient of a vector field.
inline double h1_seminorm(const VectorField& u) {
    double s = 0.0;
    const double kb = M_PI / u.grid.half_width;
    const double box_vol = 8.0 * std::pow(u.grid.half_width, 3);
    const double nn = static_cast<double>(u.grid.size());
    for (int c = 0; c < 3; ++c) {
        SpectralRep sp = transform(u[c]);
        for_each_mode(sp, [&](int kx, int ky, int kz, std::complex<double>& cc) {
            double k2 = kb * kb * (double(kx) * kx + double(ky) * ky + double(kz) * kz);
            s += k2 * std::norm(cc);
        });
    }
    return std::sqrt(s / (nn * nn) * box_vol);
}

}  // namespace critns
