// Reference flows (exact solutions and synthetic ladders) and a
// pseudo-spectral time stepper for short verification runs.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "critns/grid.hpp"
#include "critns/local_energy.hpp"
#include "critns/profile.hpp"
#include "critns/spectral.hpp"

namespace critns {

/// Named flow with analytic fields; is_solution marks whether the fields
/// satisfy the viscous momentum balance exactly.
struct FlowSpec {
    std::string name;
    AnalyticFlow flow;
    bool is_solution = true;
    double natural_half_width = std::numbers::pi;  ///< period convenience
};

/// ABC Beltrami flow on the 2*pi-periodic box: curl u0 = u0, so
/// u(t) = e^{-t} u0 solves the viscous equations with P = -|u|^2 / 2.
inline FlowSpec beltrami_flow(double A = 1.0, double B = 1.0, double C = 1.0) {
    FlowSpec spec;
    spec.name = "beltrami";
    spec.flow.velocity = [=](double t, const Point3& x) {
        double e = std::exp(-t);
        return Point3{e * (A * std::sin(x[2]) + C * std::cos(x[1])),
                      e * (B * std::sin(x[0]) + A * std::cos(x[2])),
                      e * (C * std::sin(x[1]) + B * std::cos(x[0]))};
    };
    spec.flow.pressure = [=](double t, const Point3& x) {
        Point3 u{std::exp(-t) * (A * std::sin(x[2]) + C * std::cos(x[1])),
                 std::exp(-t) * (B * std::sin(x[0]) + A * std::cos(x[2])),
                 std::exp(-t) * (C * std::sin(x[1]) + B * std::cos(x[0]))};
        return -0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    };
    return spec;
}

/// Classic Taylor-Green vortex initial data with the linear-heat decay
/// factor e^{-2t}; exact for the Stokes part only, so at finite amplitude
/// it is flagged as a non-solution reference field (the nonlinear term
/// is nonzero and feeds higher harmonics).
inline FlowSpec taylor_green(double amplitude = 1.0) {
    FlowSpec spec;
    spec.name = "taylor-green";
    spec.is_solution = false;
    spec.flow.velocity = [=](double t, const Point3& x) {
        double e = amplitude * std::exp(-2.0 * t);
        return Point3{e * std::cos(x[0]) * std::sin(x[1]) * std::sin(x[2]),
                      -e * std::sin(x[0]) * std::cos(x[1]) * std::sin(x[2]) / 2.0,
                      -e * std::sin(x[0]) * std::sin(x[1]) * std::cos(x[2]) / 2.0};
    };
    spec.flow.pressure = [=](double t, const Point3& x) {
        double e = amplitude * std::exp(-2.0 * t);
        return (e * e / 16.0) *
               (2.0 + std::cos(2.0 * x[0])) * (std::cos(2.0 * x[1]) + std::cos(2.0 * x[2]));
    };
    return spec;
}

/// Unidirectional shear u = (f(y) e^{-t}, 0, 0): divergence-free, the
/// nonlinear term vanishes identically, and with f a single Fourier mode
/// (frequency 1) the heat decay is exact; P = 0.
inline FlowSpec shear_mode(double amplitude = 1.0) {
    FlowSpec spec;
    spec.name = "shear-mode";
    spec.flow.velocity = [=](double t, const Point3& x) {
        return Point3{amplitude * std::exp(-t) * std::sin(x[1]), 0.0, 0.0};
    };
    spec.flow.pressure = [](double, const Point3&) { return 0.0; };
    return spec;
}

/// Time ladder of projected blow-up profiles, delta_k = sqrt(T - t_k) on the
/// dyadic times t_k = T - 2^{-k}.  These fields realize the critical-norm
/// growth rates but are NOT a solution of the momentum balance; consumers
/// must treat the time axis as a parameter scan.
struct ProfileLadder {
    std::vector<double> times;
    std::vector<double> deltas;
    std::vector<VectorField> fields;
    bool is_solution = false;
};

inline ProfileLadder profile_ladder(double s, double t_final, int k_lo, int k_hi,
                                    const Grid3& g) {
    if (k_hi < k_lo) throw std::invalid_argument("profile_ladder: k_hi < k_lo");
    ProfileLadder lad;
    for (int k = k_lo; k <= k_hi; ++k) {
        double gap = std::pow(2.0, -k);
        ProfileParams p;
        p.s = s;
        p.delta = std::sqrt(gap);
        lad.times.push_back(t_final - gap);
        lad.deltas.push_back(p.delta);
        lad.fields.push_back(blowup_field(p, g));
    }
    return lad;
}

/// 2/3-rule dealiasing mask in place on a spectral representation.
inline void dealias(SpectralRep& s) {
    const int n = s.grid.n;
    const int kmax = n / 3;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        if (std::abs(kx) > kmax || std::abs(ky) > kmax || std::abs(kz) > kmax)
            c = {0.0, 0.0};
    });
}

namespace flow_detail {

/// Nonlinear term N(u) = -P_leray[(u . grad) u] in spectral space,
/// dealiased; inputs are the spectral components of u.
inline std::array<SpectralRep, 3> nonlinear_term(const Grid3& g,
                                                 const std::array<SpectralRep, 3>& uhat) {
    std::array<ScalarField, 3> u;
    std::array<ScalarField, 3> adv;
    for (int c = 0; c < 3; ++c) u[c] = inverse_transform(uhat[c]);
    for (int c = 0; c < 3; ++c) {
        adv[c] = ScalarField(g);
        for (int a = 0; a < 3; ++a) {
            ScalarField d = inverse_transform(derivative(uhat[c], a));
            for (std::size_t i = 0; i < d.values.size(); ++i)
                adv[c].values[i] += u[a].values[i] * d.values[i];
        }
    }
    std::array<SpectralRep, 3> nhat{transform(adv[0]), transform(adv[1]),
                                    transform(adv[2])};
    for (auto& comp : nhat)
        for (auto& c : comp.coeff) c = -c;
    leray_project(nhat);
    for (auto& comp : nhat) dealias(comp);
    return nhat;
}

}  // namespace flow_detail

struct StepperResult {
    SpaceTimeField history;
    double cfl_max = 0.0;  ///< max over steps of |u|_inf dt / h
};

/// Viscous-term treatment.  The integrating factor is exact for pure
/// diffusion, so on single-wavenumber exact flows (where the projected
/// nonlinearity vanishes) it reproduces the solution to roundoff;
/// explicit_rk2 folds -k^2 u into the RK2 stages instead, exposing the
/// O(dt^2) truncation error for convergence studies.
enum class ViscScheme { integrating_factor, explicit_rk2 };

/// RK2 (midpoint) with exact integrating factor for the viscous term.
/// Advances divergence-free data u0 over n_steps of size dt, recording
/// every record_every-th state (plus initial and final) with the
/// spectrally recovered pressure.
inline StepperResult spectral_step(const VectorField& u0, double dt, int n_steps,
                                   int record_every = 1, double cfl_limit = 0.5,
                                   ViscScheme scheme = ViscScheme::integrating_factor) {
    u0.check();
    if (!(dt > 0.0) || n_steps < 1)
        throw std::invalid_argument("spectral_step: need dt > 0 and n_steps >= 1");
    const Grid3& g = u0.grid;
    const double kappa = std::numbers::pi / g.half_width;  // physical wavevector unit

    std::array<SpectralRep, 3> uhat{transform(u0[0]), transform(u0[1]), transform(u0[2])};
    leray_project(uhat);
    for (auto& c : uhat) dealias(c);

    auto visc_factor = [&](double tau, std::array<SpectralRep, 3>& v) {
        for (auto& comp : v)
            for_each_mode(comp, [&](int kx, int ky, int kz, std::complex<double>& c) {
                double k2 = kappa * kappa * double(kx * kx + ky * ky + kz * kz);
                c *= std::exp(-k2 * tau);
            });
    };
    auto to_field = [&](const std::array<SpectralRep, 3>& v) {
        VectorField u(g);
        for (int c = 0; c < 3; ++c) u[c] = inverse_transform(v[c]);
        return u;
    };

    StepperResult out;
    out.history.grid = g;
    auto record = [&](double t, const std::array<SpectralRep, 3>& v) {
        VectorField u = to_field(v);
        out.history.times.push_back(t);
        out.history.P.push_back(pressure_from_velocity(u));
        out.history.u.push_back(std::move(u));
    };

    record(0.0, uhat);
    for (int step = 0; step < n_steps; ++step) {
        {
            double sup = to_field(uhat).max_abs();
            out.cfl_max = std::max(out.cfl_max, sup * dt / g.spacing());
            if (out.cfl_max > cfl_limit)
                throw std::runtime_error("spectral_step: CFL number " +
                                         std::to_string(out.cfl_max) +
                                         " exceeds limit " + std::to_string(cfl_limit));
        }
        if (scheme == ViscScheme::integrating_factor) {
            // Midpoint RK2 on the integrating-factor variable v = e^{k^2 t} u:
            //   u_half = e^{-k^2 dt/2} (u + dt/2 N(u))
            //   u_next = e^{-k^2 dt} u + dt e^{-k^2 dt/2} N(u_half)
            std::array<SpectralRep, 3> n1 = flow_detail::nonlinear_term(g, uhat);
            std::array<SpectralRep, 3> half = uhat;
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < half[c].coeff.size(); ++i)
                    half[c].coeff[i] += 0.5 * dt * n1[c].coeff[i];
            visc_factor(0.5 * dt, half);
            std::array<SpectralRep, 3> n2 = flow_detail::nonlinear_term(g, half);
            visc_factor(0.5 * dt, n2);
            visc_factor(dt, uhat);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < uhat[c].coeff.size(); ++i)
                    uhat[c].coeff[i] += dt * n2[c].coeff[i];
        } else {
            // Fully explicit midpoint RK2 on F(u) = -k^2 u + N(u).
            auto rhs = [&](const std::array<SpectralRep, 3>& v) {
                std::array<SpectralRep, 3> f = flow_detail::nonlinear_term(g, v);
                for (int c = 0; c < 3; ++c) {
                    std::size_t i = 0;
                    for_each_mode(f[c], [&](int kx, int ky, int kz, std::complex<double>& cc) {
                        double k2 = kappa * kappa * double(kx * kx + ky * ky + kz * kz);
                        cc -= k2 * v[c].coeff[i];
                        ++i;
                    });
                }
                return f;
            };
            std::array<SpectralRep, 3> f1 = rhs(uhat);
            std::array<SpectralRep, 3> half = uhat;
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < half[c].coeff.size(); ++i)
                    half[c].coeff[i] += 0.5 * dt * f1[c].coeff[i];
            std::array<SpectralRep, 3> f2 = rhs(half);
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < uhat[c].coeff.size(); ++i)
                    uhat[c].coeff[i] += dt * f2[c].coeff[i];
        }
        for (auto& c : uhat) dealias(c);
        double t = dt * (step + 1);
        if ((step + 1) % record_every == 0 || step + 1 == n_steps)
            if (out.history.times.back() < t) record(t, uhat);
    }
    return out;
}

}  // namespace critns
