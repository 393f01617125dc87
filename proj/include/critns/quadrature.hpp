// Adaptive Gauss-Legendre quadrature and incomplete-gamma tails for the
// logarithmically singular radial integrals.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace critns {

namespace detail {
// 15-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double gl15_x[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double gl15_w[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <class Fn>
double gl15(const Fn& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += gl15_w[i] * f(c + h * gl15_x[i]);
    return s * h;
}

template <class Fn>
double adapt(const Fn& f, double a, double b, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double left = gl15(f, a, m), right = gl15(f, m, b);
    if (std::abs(left + right - whole) <= tol || depth <= 0)
        return left + right;
    return adapt(f, a, m, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Adaptive Gauss-Legendre integration of f over [a, b], absolute tolerance.
template <class Fn>
double integrate(const Fn& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 40) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, detail::gl15(f, a, b), abs_tol, max_depth);
}

/// Upper incomplete gamma Gamma(a, x) = int_x^inf e^{-t} t^{a-1} dt, a > 0.
inline double upper_incomplete_gamma(double a, double x) {
    return boost::math::tgamma<double>(a, x);
}

/// int_0^upper r^{p-1} (-ln r)^q w(r) dr via the substitution eta = -ln r,
/// which turns the integrand into e^{-p eta} eta^q w(e^{-eta}).  w must be
/// identically 1 on (0, plateau]; the tail beyond eta0 = -ln(plateau) is the
/// incomplete gamma p^{-(q+1)} Gamma(q+1, p*eta0) when q > -1, else it is
/// integrated adaptively on a truncated range.
template <class Weight>
double log_singular_radial_integral(double p, double q, double upper, double plateau,
                                    const Weight& w, double abs_tol = 1e-10) {
    if (!(p > 0.0)) throw std::invalid_argument("log_singular_radial_integral: p <= 0");
    if (!(0.0 < plateau && plateau <= upper && upper < 1.0))
        throw std::invalid_argument("log_singular_radial_integral: need 0 < plateau <= upper < 1");
    const double eta_lo = -std::log(upper);
    const double eta0 = -std::log(plateau);
    auto g = [&](double eta) {
        return std::exp(-p * eta) * std::pow(eta, q) * w(std::exp(-eta));
    };
    double head = integrate(g, eta_lo, eta0, abs_tol);
    double tail;
    if (q > -1.0) {
        tail = std::pow(p, -(q + 1.0)) * upper_incomplete_gamma(q + 1.0, p * eta0);
    } else {
        // e^{-p eta} eta^q with q <= -1: integrable at infinity, decays
        // exponentially; truncate where the envelope is below tolerance.
        double eta_hi = std::max(eta0 + 1.0, (-std::log(abs_tol * 1e-3) + 50.0) / p);
        tail = integrate(g, eta0, eta_hi, abs_tol);
    }
    return head + tail;
}

}  // namespace critns
