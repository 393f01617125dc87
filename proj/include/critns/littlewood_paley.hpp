// Dyadic frequency blocks.  Two kernel families live here:
//
//  * an annulus-supported partition family whose squared symbols telescope
//    to 1, used for block decomposition and the B^0_{inf,inf} profile;
//  * a mean-carrying low-pass family (kernel integral != 0) used for the
//    logarithm growth diagnostic, where the block at scale j picks up the
//    local mean of ln|x| at scale 2^{-j} and therefore grows linearly in j.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "critns/cutoffs.hpp"
#include "critns/fft.hpp"
#include "critns/grid.hpp"
#include "critns/spectral.hpp"

namespace critns {

namespace lp_detail {

/// Squared low-pass ramp: 1 for t <= 3/4, 0 for t >= 4/3.
inline double sq_lowpass(double t) {
    if (t <= 0.75) return 1.0;
    if (t >= 4.0 / 3.0) return 0.0;
    return 1.0 - smoothstep3((t - 0.75) / (4.0 / 3.0 - 0.75));
}

/// Symbol of block j (j >= -1) at physical frequency xi, with the top block
/// j_top closing the partition: sum of squares over j = -1..j_top equals 1
/// for every resolvable frequency.  Support of block j >= 0 is the annulus
/// 3/4 * 2^j <= xi <= 8/3 * 2^j.
inline double block_symbol(int j, int j_top, double xi) {
    auto L = [&](int jj) { return sq_lowpass(xi / std::pow(2.0, jj)); };
    double sq;
    if (j < 0) {
        sq = L(0);
    } else if (j == j_top) {
        sq = 1.0 - L(j);
    } else {
        sq = L(j + 1) - L(j);
    }
    return sq > 0.0 ? std::sqrt(sq) : 0.0;
}

}  // namespace lp_detail

/// Frequency-localized piece Delta_j f of a 3-D field (annulus family).
inline ScalarField lp_block_decompose(const ScalarField& f, int j, int j_max) {
    f.grid.validate();
    if (j < -1 || j > j_max) throw std::invalid_argument("lp_block_decompose: bad j");
    double resolvable = std::log2(double(f.grid.n) / 4.0);
    if (j_max > resolvable)
        throw std::invalid_argument("lp_block_decompose: j_max beyond resolvable range");
    SpectralRep s = transform(f);
    const double kb = M_PI / f.grid.half_width;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        double xi = kb * std::sqrt(double(kx) * kx + double(ky) * ky + double(kz) * kz);
        c *= lp_detail::block_symbol(j, j_max, xi);
    });
    return inverse_transform(s);
}

/// Sup norms ||Delta_j f||_inf for j = -1..j_max.
inline std::vector<double> besov_b0infinf_profile(const ScalarField& f, int j_max) {
    std::vector<double> out;
    for (int j = -1; j <= j_max; ++j)
        out.push_back(lp_block_decompose(f, j, j_max).max_abs());
    return out;
}

/// Mean-carrying smoothing block of ln|x| on a 1-D cell-centered grid of n
/// points over [-L, L): symbol W(beta * |xi| / 2^j) with W a low-pass ramp
/// (1 up to 2, C^1 ramp to zero at 8/3).  The width factor beta = 4
/// normalizes the kernel so the block sup-norm tracks j ln 2 with a small
/// additive offset.  Returns sup norms for j = j_lo..j_hi.
inline std::vector<double> log_block_growth_1d(int n, double half_width, int j_lo,
                                               int j_hi, double beta = 4.0) {
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("log_block_growth_1d: n must be a power of two >= 16");
    if (j_lo < 0 || j_hi < j_lo)
        throw std::invalid_argument("log_block_growth_1d: bad j range");
    // top block must stay well below Nyquist
    double nyq = M_PI / (2.0 * half_width) * n / 2.0;
    if ((8.0 / 3.0) * std::pow(2.0, j_hi) / beta > nyq)
        throw std::invalid_argument("log_block_growth_1d: j_hi beyond resolvable range");

    const double h = 2.0 * half_width / n;
    std::vector<std::complex<double>> F(n);
    for (int i = 0; i < n; ++i) {
        double x = -half_width + (i + 0.5) * h;
        F[i] = std::log(std::abs(x));
    }
    fft::forward_1d(n, F.data());

    auto ramp = [](double t) {
        if (t <= 2.0) return 1.0;
        if (t >= 8.0 / 3.0) return 0.0;
        double u = (t - 2.0) / (8.0 / 3.0 - 2.0);
        return 1.0 - u * u * (3.0 - 2.0 * u);
    };

    std::vector<double> out;
    const double kb = M_PI / half_width;
    for (int j = j_lo; j <= j_hi; ++j) {
        std::vector<std::complex<double>> blk(n);
        double scale = beta / std::pow(2.0, j);
        for (int i = 0; i < n; ++i) {
            double xi = kb * std::abs(double(fft::wavenumber(i, n)));
            blk[i] = F[i] * ramp(xi * scale);
        }
        fft::backward_1d(n, blk.data());
        double m = 0.0;
        for (int i = 0; i < n; ++i) m = std::max(m, std::abs(blk[i].real() / n));
        out.push_back(m);
    }
    return out;
}

}  // namespace critns
