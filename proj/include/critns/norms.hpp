// Norm estimators: L^p, weak Lorentz in time, BMO, Morrey M^{2,1},
// and the layer-cake window bound with constant 2*3^{3/4}.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "critns/grid.hpp"

namespace critns {

/// A norm sampled in time: strictly increasing times, nonnegative values.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    void check() const {
        if (times.empty() || times.size() != values.size())
            throw std::invalid_argument("TimeSeries: empty or mismatched lengths");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("TimeSeries: times not strictly increasing");
        for (double v : values)
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("TimeSeries: values must be finite and >= 0");
    }
};

namespace detail {
/// Step-measure view of a series restricted to [a, b]: each sample owns the
/// cell between neighboring midpoints, clipped to the window.  The same
/// weights back both the integral and the rearrangement, so layer-cake
/// manipulations are exact on the step function.
inline void step_cells(const TimeSeries& ts, double a, double b,
                       std::vector<double>& vals, std::vector<double>& weights) {
    vals.clear();
    weights.clear();
    const std::size_t m = ts.times.size();
    for (std::size_t i = 0; i < m; ++i) {
        double lo = (i == 0) ? a : 0.5 * (ts.times[i - 1] + ts.times[i]);
        double hi = (i + 1 == m) ? b : 0.5 * (ts.times[i] + ts.times[i + 1]);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
        if (hi > lo) {
            vals.push_back(ts.values[i]);
            weights.push_back(hi - lo);
        }
    }
    if (vals.empty()) throw std::invalid_argument("window not covered by samples");
}
}  // namespace detail

/// Weak-L^r norm of a sampled series over its own span:
/// sup_sigma sigma * |{f > sigma}|^{1/r}, sigma over sample values (the sup
/// of the step rearrangement is attained there).
inline double lorentz_weak_norm(const TimeSeries& ts, double r) {
    ts.check();
    if (!(r >= 1.0)) throw std::invalid_argument("lorentz_weak_norm: r must be >= 1");
    std::vector<double> vals, w;
    detail::step_cells(ts, ts.times.front(), ts.times.back(), vals, w);
    std::vector<std::size_t> order(vals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    double measure = 0.0, best = 0.0;
    for (std::size_t oi : order) {
        measure += w[oi];  // measure of {f >= vals[oi]}
        best = std::max(best, vals[oi] * std::pow(measure, 1.0 / r));
    }
    return best;
}

struct LayerCakeCheck {
    double lhs = 0.0;    ///< r^{-1/2} int_window ||u||_BMO^{3/2}
    double rhs = 0.0;    ///< 2 * 3^{3/4} * M^{3/2}
    double weak_l2 = 0.0;
    bool satisfied = false;
};

/// Window bound r^{-1/2} int_{t-r^2}^{t} f^{3/2} ds <= 2*3^{3/4} M^{3/2}
/// with M the weak-L^2 norm of f over the window.  Both sides are computed
/// from the same step measure, so the bound is exact for the discretization.
inline LayerCakeCheck layer_cake_bound_check(const TimeSeries& ts, double t_end, double r) {
    ts.check();
    if (!(r > 0.0)) throw std::invalid_argument("layer_cake_bound_check: r <= 0");
    const double a = t_end - r * r;
    if (ts.times.front() > a + 1e-12 || ts.times.back() < t_end - 1e-12)
        throw std::invalid_argument("layer_cake_bound_check: window not covered by samples");
    std::vector<double> vals, w;
    detail::step_cells(ts, a, t_end, vals, w);

    double integral = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        integral += std::pow(vals[i], 1.5) * w[i];

    std::vector<std::size_t> order(vals.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return vals[x] > vals[y]; });
    double measure = 0.0, M = 0.0;
    for (std::size_t oi : order) {
        measure += w[oi];
        M = std::max(M, vals[oi] * std::sqrt(measure));
    }

    LayerCakeCheck out;
    out.lhs = integral / std::sqrt(r);
    out.weak_l2 = M;
    out.rhs = 2.0 * std::pow(3.0, 0.75) * std::pow(M, 1.5);
    out.satisfied = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

/// Ball samples for sup-over-balls estimators (BMO, Morrey).  The estimate
/// is a lower bound of the true sup; refine the sampler to tighten it.
struct BallSampler {
    std::vector<Point3> centers;
    std::vector<double> radii;
    std::size_t min_cells = 8;

    /// Deterministic default: centers on a coarse sublattice inside
    /// [-extent, extent]^3, radii on a dyadic ladder with `per_octave`
    /// radii per octave.
    static BallSampler lattice(const Grid3& g, double extent, int stride,
                               double r_min, double r_max, int per_octave = 4) {
        BallSampler s;
        for (double cx = -extent; cx <= extent + 1e-12; cx += extent == 0 ? 1 : extent / stride)
            for (double cy = -extent; cy <= extent + 1e-12;
                 cy += extent == 0 ? 1 : extent / stride)
                for (double cz = -extent; cz <= extent + 1e-12;
                     cz += extent == 0 ? 1 : extent / stride) {
                    s.centers.push_back({cx, cy, cz});
                    if (extent == 0) break;
                }
        double factor = std::pow(2.0, 1.0 / per_octave);
        for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= factor) s.radii.push_back(r);
        if (s.radii.empty()) s.radii.push_back(r_min);
        (void)g;
        return s;
    }
};

/// h^3-weighted Riemann-sum L^p norm; p = infinity returns the max magnitude.
inline double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) return f.max_abs();
    double s = 0.0;
    for (double v : f.values) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid.cell_volume(), 1.0 / p);
}

inline double lp_norm(const VectorField& u, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    ScalarField mag = u.magnitude();
    return lp_norm(mag, p);
}

namespace detail {
template <class Body>
void for_cells_in_ball(const Grid3& g, const Point3& c, double r, Body&& body) {
    int n = g.n;
    double h = g.spacing();
    auto lo = [&](double x) {
        return std::max(0, int(std::floor((x - r + g.half_width) / h - 0.5)));
    };
    auto hi = [&](double x) {
        return std::min(n - 1, int(std::ceil((x + r + g.half_width) / h - 0.5)));
    };
    double r2 = r * r;
    for (int k = lo(c[2]); k <= hi(c[2]); ++k) {
        double dz = g.coord(k) - c[2];
        for (int j = lo(c[1]); j <= hi(c[1]); ++j) {
            double dy = g.coord(j) - c[1];
            for (int i = lo(c[0]); i <= hi(c[0]); ++i) {
                double dx = g.coord(i) - c[0];
                if (dx * dx + dy * dy + dz * dz < r2) body(g.index(i, j, k));
            }
        }
    }
}
}  // namespace detail

struct BmoReport {
    double value = 0.0;
    int balls_used = 0;
    int balls_skipped = 0;
};

/// Mean-oscillation sup over sampled balls: max over (center, radius) of
/// the mean absolute deviation from the ball mean, per component.
inline BmoReport bmo_norm_report(const ScalarField& f, const BallSampler& sampler) {
    BmoReport rep;
    std::vector<std::size_t> cells;
    for (const auto& c : sampler.centers)
        for (double r : sampler.radii) {
            cells.clear();
            detail::for_cells_in_ball(f.grid, c, r,
                                      [&](std::size_t idx) { cells.push_back(idx); });
            if (cells.size() < sampler.min_cells) {
                ++rep.balls_skipped;
                continue;
            }
            double mean = 0.0;
            for (std::size_t idx : cells) mean += f.values[idx];
            mean /= double(cells.size());
            double osc = 0.0;
            for (std::size_t idx : cells) osc += std::abs(f.values[idx] - mean);
            osc /= double(cells.size());
            rep.value = std::max(rep.value, osc);
            ++rep.balls_used;
        }
    return rep;
}

inline double bmo_norm(const ScalarField& f, const BallSampler& sampler) {
    return bmo_norm_report(f, sampler).value;
}

inline double bmo_norm(const VectorField& u, const BallSampler& sampler) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m = std::max(m, bmo_norm(u[c], sampler));
    return m;
}

/// Morrey M^{2,1}: sup over sampled balls of r^{-1/2} (int_{B_r} |u|^2)^{1/2}.
inline double morrey_21_norm(const VectorField& u, const BallSampler& sampler) {
    double best = 0.0;
    double vol = u.grid.cell_volume();
    for (const auto& c : sampler.centers)
        for (double r : sampler.radii) {
            double sum = 0.0;
            std::size_t count = 0;
            detail::for_cells_in_ball(u.grid, c, r, [&](std::size_t idx) {
                for (int a = 0; a < 3; ++a)
                    sum += u[a].values[idx] * u[a].values[idx];
                ++count;
            });
            if (count < sampler.min_cells) continue;
            best = std::max(best, std::sqrt(sum * vol / r));
        }
    return best;
}

}  // namespace critns
