// Energy-measure approximation: weak-* ladders, local and concentration
// dimension estimates, and energy-equality residuals.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "critns/grid.hpp"
#include "critns/local_energy.hpp"
#include "critns/norms.hpp"
#include "critns/spectral.hpp"

namespace critns {

/// Nonnegative density approximating a Radon measure; cell mass is
/// density * h^3.  Synthetic atoms carry their mass exactly.
struct MeasureApprox {
    Grid3 grid;
    std::vector<double> density;
    std::vector<std::pair<Point3, double>> atoms;

    MeasureApprox() = default;
    explicit MeasureApprox(const Grid3& g) : grid(g), density(g.size(), 0.0) {}

    double total_mass() const {
        double s = 0.0;
        for (double d : density) s += d;
        s *= grid.cell_volume();
        for (const auto& a : atoms) s += a.second;
        return s;
    }

    double ball_mass(const Point3& c, double r) const {
        double s = 0.0;
        detail::for_cells_in_ball(grid, c, r,
                                  [&](std::size_t idx) { s += density[idx]; });
        s *= grid.cell_volume();
        for (const auto& a : atoms)
            if (dist(a.first, c) < r) s += a.second;
        return s;
    }
};

/// |u|^2 dx as a grid density; total mass equals the grid L^2 norm squared
/// by construction (same summation).
inline MeasureApprox energy_density(const VectorField& u) {
    MeasureApprox m(u.grid);
    for (std::size_t i = 0; i < m.density.size(); ++i)
        m.density[i] = u[0].values[i] * u[0].values[i] +
                       u[1].values[i] * u[1].values[i] +
                       u[2].values[i] * u[2].values[i];
    return m;
}

struct WeakStarResult {
    MeasureApprox limit;                       ///< Cesaro-stabilized density
    std::vector<std::vector<double>> pairings;  ///< pairings[k][i] = <mu_k, phi_i>
    bool converged = false;
    double last_gap = 0.0;  ///< max_i |<mu_K, phi_i> - <mu_{K-1}, phi_i>|
};

/// Pairs each measure of the ladder against the test dictionary and declares
/// convergence when successive pairings differ below tol for every test
/// function.  The returned density is the Cesaro mean of the tail half.
inline WeakStarResult weak_star_limit(const std::vector<MeasureApprox>& seq,
                                      const std::vector<ScalarField>& test_fns,
                                      double tol = 1e-3) {
    if (seq.empty() || test_fns.empty())
        throw std::invalid_argument("weak_star_limit: empty sequence or dictionary");
    const Grid3& g = seq.front().grid;
    for (const auto& m : seq)
        if (!(m.grid == g))
            throw std::invalid_argument("weak_star_limit: measures on different grids");
    WeakStarResult out;
    for (const auto& m : seq) {
        std::vector<double> row;
        for (const auto& phi : test_fns) {
            double s = 0.0;
            for (std::size_t i = 0; i < phi.values.size(); ++i)
                s += m.density[i] * phi.values[i];
            row.push_back(s * g.cell_volume());
        }
        out.pairings.push_back(std::move(row));
    }
    if (out.pairings.size() >= 2) {
        const auto& a = out.pairings[out.pairings.size() - 2];
        const auto& b = out.pairings.back();
        double gap = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            gap = std::max(gap, std::abs(a[i] - b[i]));
        out.last_gap = gap;
        out.converged = gap < tol;
    }
    out.limit = MeasureApprox(g);
    std::size_t tail = (seq.size() + 1) / 2;
    for (std::size_t k = seq.size() - tail; k < seq.size(); ++k)
        for (std::size_t i = 0; i < out.limit.density.size(); ++i)
            out.limit.density[i] += seq[k].density[i] / double(tail);
    return out;
}

struct DimensionEstimate {
    Point3 x{0, 0, 0};
    std::vector<double> radii;
    std::vector<double> masses;
    double slope = 0.0;     ///< fitted d ln mass / d ln r
    double residual = 0.0;
    bool infinite = false;  ///< all sampled balls carry zero mass
};

/// Least-squares slope of ln E(B_r(x)) against ln r over the radius ladder.
/// Zero-mass balls are dropped from the fit; if none carry mass the
/// dimension is reported infinite (liminf convention).
inline DimensionEstimate local_dimension(const MeasureApprox& m, const Point3& x,
                                         const std::vector<double>& radii) {
    if (radii.size() < 2) throw std::invalid_argument("local_dimension: need >= 2 radii");
    double floor_r = 2.0 * m.grid.spacing();
    DimensionEstimate est;
    est.x = x;
    std::vector<double> lr, lm;
    for (double r : radii) {
        if (r < floor_r)
            throw std::invalid_argument("local_dimension: radius below resolution floor");
        double mass = m.ball_mass(x, r);
        est.radii.push_back(r);
        est.masses.push_back(mass);
        if (mass > 0.0) {
            lr.push_back(std::log(r));
            lm.push_back(std::log(mass));
        }
    }
    if (lr.size() < 2) {
        est.infinite = true;
        est.slope = std::numeric_limits<double>::infinity();
        return est;
    }
    double n = double(lr.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        sx += lr[i]; sy += lm[i]; sxx += lr[i] * lr[i]; sxy += lr[i] * lm[i];
    }
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double b = (sy - est.slope * sx) / n, rss = 0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
        double e = lm[i] - (b + est.slope * lr[i]);
        rss += e * e;
    }
    est.residual = std::sqrt(rss / n);
    return est;
}

struct ConcentrationEstimate {
    double dimension = 0.0;
    bool zero_measure = false;
    std::vector<double> scales;
    std::vector<double> counts;  ///< minimal boxes capturing the mass fraction
};

/// Mass-constrained box counting: at each dyadic coarsening, the minimum
/// number of cells capturing mass_fraction of the total; the fitted slope of
/// ln N against ln(1/eps) is an upper-bound-style proxy for the
/// concentration dimension.  Zero measure returns 3 by convention.
inline ConcentrationEstimate concentration_dimension(const MeasureApprox& m,
                                                     double mass_fraction) {
    if (!(mass_fraction > 0.0 && mass_fraction <= 1.0))
        throw std::invalid_argument("concentration_dimension: fraction in (0,1]");
    ConcentrationEstimate out;
    double total = m.total_mass();
    if (total <= 0.0) {
        out.zero_measure = true;
        out.dimension = 3.0;
        return out;
    }
    const int n = m.grid.n;
    // coarsen by factors 2^level, level chosen so box counts span a range
    for (int level = 1; (n >> level) >= 4; ++level) {
        int cn = n >> level;
        int f = 1 << level;
        std::vector<double> boxes(std::size_t(cn) * cn * cn, 0.0);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    boxes[std::size_t(i / f) +
                          std::size_t(cn) * (std::size_t(j / f) + std::size_t(cn) * (k / f))] +=
                        m.density[m.grid.index(i, j, k)] * m.grid.cell_volume();
        for (const auto& a : m.atoms) {
            auto cell = [&](double x) {
                int c = int((x + m.grid.half_width) / (2.0 * m.grid.half_width) * cn);
                return std::clamp(c, 0, cn - 1);
            };
            boxes[std::size_t(cell(a.first[0])) +
                  std::size_t(cn) * (std::size_t(cell(a.first[1])) +
                                     std::size_t(cn) * cell(a.first[2]))] += a.second;
        }
        std::sort(boxes.begin(), boxes.end(), std::greater<double>());
        double acc = 0.0;
        std::size_t count = 0;
        for (double b : boxes) {
            acc += b;
            ++count;
            if (acc >= mass_fraction * total) break;
        }
        out.scales.push_back(m.grid.spacing() * f);
        out.counts.push_back(double(count));
    }
    if (out.scales.size() < 2)
        throw std::invalid_argument("concentration_dimension: grid too coarse");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, nn = double(out.scales.size());
    for (std::size_t i = 0; i < out.scales.size(); ++i) {
        double lx = std::log(1.0 / out.scales[i]), ly = std::log(out.counts[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    out.dimension = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return out;
}

/// residual(t) = ||u(t)||^2 + 2 int_0^t ||grad u||^2 - ||u(0)||^2,
/// dissipation by trapezoid with the spectral gradient.
inline TimeSeries global_energy_residual(const SpaceTimeField& st) {
    st.check();
    if (st.times.size() < 16)
        throw std::invalid_argument("global_energy_residual: need >= 16 time samples");
    std::vector<double> energy, grad;
    for (const auto& u : st.u) {
        double e = l2_norm(u);
        energy.push_back(e * e);
        double gval = h1_seminorm(u);
        grad.push_back(gval * gval);
    }
    TimeSeries out;
    double acc = 0.0;
    for (std::size_t i = 0; i < st.times.size(); ++i) {
        if (i > 0)
            acc += 0.5 * (grad[i - 1] + grad[i]) * (st.times[i] - st.times[i - 1]);
        out.times.push_back(st.times[i]);
        out.values.push_back(std::abs(energy[i] + 2.0 * acc - energy[0]));
    }
    return out;
}

/// Space-time test function phi(t, x) with analytic derivatives.
struct SpaceTimeTest {
    std::function<double(double, const Point3&)> phi;
    std::function<double(double, const Point3&)> phi_t_plus_lap;
    std::function<Point3(double, const Point3&)> grad;
};

struct LocalResidual {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;      ///< lhs - rhs
    double residual_rel = 0.0;  ///< |lhs - rhs| / max(|lhs|, |rhs|)
};

/// Local energy-equality residual for a test function phi vanishing at the
/// initial time:
///   lhs = int |u(t_end)|^2 phi + 2 iint |grad u|^2 phi
///   rhs = iint |u|^2 (phi_t + Lap phi) + iint (|u|^2 + 2P) u . grad phi.
inline LocalResidual local_energy_residual(const SpaceTimeField& st, const SpaceTimeTest& test) {
    st.check();
    const Grid3& g = st.grid;
    std::vector<double> diss, lin, cub;
    for (std::size_t si = 0; si < st.times.size(); ++si) {
        double t = st.times[si];
        const VectorField& uu = st.u[si];
        const ScalarField& pp = st.P[si];
        ScalarField gsq = le_detail::grad_sq(uu);
        double s_diss = 0, s_lin = 0, s_cub = 0;
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    Point3 x = g.point(i, j, k);
                    double phi = test.phi(t, x);
                    double u2 = uu[0].values[idx] * uu[0].values[idx] +
                                uu[1].values[idx] * uu[1].values[idx] +
                                uu[2].values[idx] * uu[2].values[idx];
                    s_diss += gsq.values[idx] * phi;
                    s_lin += u2 * test.phi_t_plus_lap(t, x);
                    Point3 gp = test.grad(t, x);
                    double udg = uu[0].values[idx] * gp[0] + uu[1].values[idx] * gp[1] +
                                 uu[2].values[idx] * gp[2];
                    s_cub += (u2 + 2.0 * pp.values[idx]) * udg;
                }
        double vol = g.cell_volume();
        diss.push_back(s_diss * vol);
        lin.push_back(s_lin * vol);
        cub.push_back(s_cub * vol);
    }
    double t_end = st.times.back(), t_begin = st.times.front();
    double top = 0.0;
    {
        const VectorField& uu = st.u.back();
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    Point3 x = g.point(i, j, k);
                    double u2 = uu[0].values[idx] * uu[0].values[idx] +
                                uu[1].values[idx] * uu[1].values[idx] +
                                uu[2].values[idx] * uu[2].values[idx];
                    top += u2 * test.phi(t_end, x);
                }
        top *= g.cell_volume();
    }
    LocalResidual out;
    out.lhs = top + 2.0 * le_detail::trapz_window(st.times, diss, t_begin, t_end);
    out.rhs = le_detail::trapz_window(st.times, lin, t_begin, t_end) +
              le_detail::trapz_window(st.times, cub, t_begin, t_end);
    out.residual = out.lhs - out.rhs;
    double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
    out.residual_rel = scale > 0.0 ? std::abs(out.residual) / scale : 0.0;
    return out;
}

}  // namespace critns
