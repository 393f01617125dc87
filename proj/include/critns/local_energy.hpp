// Scale-invariant quantities A, B, C, D on parabolic cylinders, the
// pressure splitting, the heat-kernel-weighted local energy balance, the
// decay ledgers and iteration, and the epsilon-regularity predicate.
#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "critns/cutoffs.hpp"
#include "critns/grid.hpp"
#include "critns/norms.hpp"
#include "critns/spectral.hpp"

namespace critns {

/// Q_r(z) = B_r(x) x (t - r^2, t).
struct ParabolicCylinder {
    double t = 0.0;
    Point3 x{0.0, 0.0, 0.0};
    double r = 0.0;
};

/// Sampled (u, P) on a shared grid over increasing times.
struct SpaceTimeField {
    Grid3 grid;
    std::vector<double> times;
    std::vector<VectorField> u;
    std::vector<ScalarField> P;
    bool is_solution = true;  ///< false for snapshot families (no PDE residual)

    void check() const {
        if (times.size() != u.size() || times.size() != P.size())
            throw std::invalid_argument("SpaceTimeField: slice count mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("SpaceTimeField: times not increasing");
        for (const auto& f : u)
            if (!(f.grid == grid))
                throw std::invalid_argument("SpaceTimeField: grid mismatch");
    }
};

struct InvariantQuad {
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
};

namespace le_detail {

/// Trapezoid integral of per-slice samples over [a, b] with linear
/// interpolation at the window edges.
inline double trapz_window(const std::vector<double>& t, const std::vector<double>& v,
                           double a, double b) {
    double sum = 0.0;
    auto interp = [&](double s, std::size_t i) {
        double w = (s - t[i]) / (t[i + 1] - t[i]);
        return (1.0 - w) * v[i] + w * v[i + 1];
    };
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double lo = std::max(t[i], a), hi = std::min(t[i + 1], b);
        if (hi <= lo) continue;
        sum += 0.5 * (interp(lo, i) + interp(hi, i)) * (hi - lo);
    }
    return sum;
}

inline void require_inside(const SpaceTimeField& st, const ParabolicCylinder& q) {
    st.check();
    for (int a = 0; a < 3; ++a)
        if (std::abs(q.x[a]) + q.r > st.grid.half_width)
            throw std::invalid_argument("cylinder ball clips the box");
    double t0 = q.t - q.r * q.r;
    if (t0 < st.times.front() - 1e-12 || q.t > st.times.back() + 1e-12)
        throw std::invalid_argument("cylinder time window outside samples");
    int inside = 0;
    for (double s : st.times)
        if (s >= t0 - 1e-12 && s <= q.t + 1e-12) ++inside;
    if (inside < 4)
        throw std::invalid_argument("need >= 4 time samples per cylinder height");
}

/// Sum of |grad u|^2 pointwise (spectral derivatives).
inline ScalarField grad_sq(const VectorField& u) {
    ScalarField g(u.grid);
    for (int c = 0; c < 3; ++c)
        for (int a = 0; a < 3; ++a) {
            ScalarField d = derivative(u[c], a);
            for (std::size_t i = 0; i < g.values.size(); ++i)
                g.values[i] += d.values[i] * d.values[i];
        }
    return g;
}

/// Ball integral with partial-volume weights: cells within one spacing of
/// the sphere get a linear ramp weight, which drops the O(h) volume error of
/// plain cell-center counting to O(h^2).
inline double ball_sum(const ScalarField& f, const Point3& c, double r) {
    const Grid3& g = f.grid;
    const double h = g.spacing();
    auto lo_idx = [&](double x) {
        return std::max(0, int(std::floor((x + g.half_width) / h - 0.5)));
    };
    auto hi_idx = [&](double x) {
        return std::min(g.n - 1, int(std::ceil((x + g.half_width) / h - 0.5)));
    };
    double s = 0.0;
    for (int k = lo_idx(c[2] - r - h); k <= hi_idx(c[2] + r + h); ++k)
        for (int j = lo_idx(c[1] - r - h); j <= hi_idx(c[1] + r + h); ++j)
            for (int i = lo_idx(c[0] - r - h); i <= hi_idx(c[0] + r + h); ++i) {
                double d = dist(g.point(i, j, k), c);
                double w = (r - d) / h + 0.5;
                if (w <= 0.0) continue;
                if (w > 1.0) w = 1.0;
                s += w * f.at(i, j, k);
            }
    return s * g.cell_volume();
}

}  // namespace le_detail

/// A = sup_s r^{-1} int_{B_r} |u|^2;  B = r^{-1} iint |grad u|^2;
/// C = r^{-2} iint |u|^3;  D = r^{-2} iint |P|^{3/2}.
/// A's sup runs over sampled slice times in [t - r^2, t).
inline InvariantQuad invariants(const SpaceTimeField& st, const ParabolicCylinder& q) {
    le_detail::require_inside(st, q);
    const double t0 = q.t - q.r * q.r;
    InvariantQuad out;
    std::vector<double> b_series, c_series, d_series, win_t;
    for (std::size_t i = 0; i < st.times.size(); ++i) {
        double s = st.times[i];
        // keep one bracketing slice on each side so the trapezoid rule can
        // interpolate across window edges that fall between samples
        bool before = s < t0 - 1e-12, after = s > q.t + 1e-12;
        if (before && (i + 1 == st.times.size() || st.times[i + 1] < t0 - 1e-12)) continue;
        if (after && (i == 0 || st.times[i - 1] > q.t + 1e-12)) continue;
        win_t.push_back(s);
        ScalarField usq(st.grid), ucube(st.grid), p32(st.grid);
        const VectorField& uu = st.u[i];
        for (std::size_t m = 0; m < usq.values.size(); ++m) {
            double a2 = uu[0].values[m] * uu[0].values[m] +
                        uu[1].values[m] * uu[1].values[m] +
                        uu[2].values[m] * uu[2].values[m];
            usq.values[m] = a2;
            ucube.values[m] = a2 * std::sqrt(a2);
            p32.values[m] = std::pow(std::abs(st.P[i].values[m]), 1.5);
        }
        double e = le_detail::ball_sum(usq, q.x, q.r);
        if (s >= t0 - 1e-12 && s < q.t - 1e-12) out.A = std::max(out.A, e / q.r);
        b_series.push_back(le_detail::ball_sum(le_detail::grad_sq(uu), q.x, q.r));
        c_series.push_back(le_detail::ball_sum(ucube, q.x, q.r));
        d_series.push_back(le_detail::ball_sum(p32, q.x, q.r));
    }
    out.B = le_detail::trapz_window(win_t, b_series, t0, q.t) / q.r;
    out.C = le_detail::trapz_window(win_t, c_series, t0, q.t) / (q.r * q.r);
    out.D = le_detail::trapz_window(win_t, d_series, t0, q.t) / (q.r * q.r);
    return out;
}

/// Analytic space-time flow used for rescaling checks and exact data.
struct AnalyticFlow {
    std::function<Point3(double, const Point3&)> velocity;
    std::function<double(double, const Point3&)> pressure;
};

inline SpaceTimeField sample_flow(const AnalyticFlow& flow, const Grid3& g,
                                  const std::vector<double>& times) {
    SpaceTimeField st;
    st.grid = g;
    st.times = times;
    for (double t : times) {
        VectorField u(g);
        ScalarField p(g);
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    Point3 x = g.point(i, j, k);
                    Point3 v = flow.velocity(t, x);
                    u[0].values[idx] = v[0];
                    u[1].values[idx] = v[1];
                    u[2].values[idx] = v[2];
                    p.values[idx] = flow.pressure(t, x);
                }
        st.u.push_back(std::move(u));
        st.P.push_back(std::move(p));
    }
    return st;
}

/// Invariants of the flow on Q and of the rescaled flow
/// u_lambda(t,x) = lambda u(lambda^2 t, lambda x) on the rescaled cylinder.
/// Both are sampled afresh, so agreement is limited by discretization only.
inline std::pair<InvariantQuad, InvariantQuad> scaling_invariance_check(
    const AnalyticFlow& flow, const Grid3& g, const ParabolicCylinder& q,
    double lambda, int slices) {
    auto make_times = [&](double t_top, double height) {
        std::vector<double> ts;
        for (int i = 0; i <= slices; ++i)
            ts.push_back(t_top - height + height * i / slices);
        return ts;
    };
    SpaceTimeField orig =
        sample_flow(flow, g, make_times(q.t, 1.25 * q.r * q.r));
    InvariantQuad before = invariants(orig, q);

    AnalyticFlow scaled;
    scaled.velocity = [=, &flow](double t, const Point3& x) {
        Point3 v = flow.velocity(lambda * lambda * t,
                                 {lambda * x[0], lambda * x[1], lambda * x[2]});
        return Point3{lambda * v[0], lambda * v[1], lambda * v[2]};
    };
    scaled.pressure = [=, &flow](double t, const Point3& x) {
        return lambda * lambda *
               flow.pressure(lambda * lambda * t,
                             {lambda * x[0], lambda * x[1], lambda * x[2]});
    };
    ParabolicCylinder qs;
    qs.r = q.r / lambda;
    qs.t = q.t / (lambda * lambda);
    qs.x = {q.x[0] / lambda, q.x[1] / lambda, q.x[2] / lambda};
    SpaceTimeField resc =
        sample_flow(scaled, g, make_times(qs.t, 1.25 * qs.r * qs.r));
    InvariantQuad after = invariants(resc, qs);
    return {before, after};
}

struct PressureSplit {
    ScalarField P1;  ///< -Delta P1 = d_i d_j (u_i u_j eta), zero mean
    ScalarField P2;  ///< P - P1, harmonic inside B_{rho / 2}
    double harmonic_residual = 0.0;  ///< max |Delta P2| in B_{rho/2} / max |Delta P|
    double cz_ratio = 0.0;           ///< int_{B_rho}|P1|^{3/2} / int_{B_rho}|u|^3
};

/// Localized pressure splitting with eta = 1 on B_{rho/2}, 0 outside
/// B_rho (wide C^7 ramp so the spectral leakage of the product stays small).
inline PressureSplit pressure_split(const VectorField& u, const ScalarField& P,
                                    double rho, const Point3& center = {0, 0, 0}) {
    u.check();
    if (rho <= 0.0 || rho > u.grid.half_width)
        throw std::invalid_argument("pressure_split: ball outside box");
    const Grid3& g = u.grid;
    ScalarField eta(g);
    {
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    double r = dist(g.point(i, j, k), center);
                    eta.values[idx] = radial_cutoff7(r, 0.5 * rho, rho);
                }
    }
    ScalarField rhs(g);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            ScalarField prod(g);
            for (std::size_t i = 0; i < prod.values.size(); ++i)
                prod.values[i] = u[a].values[i] * u[b].values[i] * eta.values[i];
            rhs += derivative(derivative(prod, a), b);
        }
    PressureSplit out;
    out.P1 = inverse_neg_laplacian(rhs);
    out.P2 = P - out.P1;

    ScalarField lap2 = laplacian(out.P2);
    double inner_max = 0.0, global_scale = laplacian(P).max_abs();
    detail::for_cells_in_ball(g, center, 0.5 * rho, [&](std::size_t idx) {
        inner_max = std::max(inner_max, std::abs(lap2.values[idx]));
    });
    out.harmonic_residual = global_scale > 0.0 ? inner_max / global_scale : 0.0;

    double p1_int = 0.0, u3_int = 0.0;
    detail::for_cells_in_ball(g, center, rho, [&](std::size_t idx) {
        p1_int += std::pow(std::abs(out.P1.values[idx]), 1.5);
        double a2 = u[0].values[idx] * u[0].values[idx] +
                    u[1].values[idx] * u[1].values[idx] +
                    u[2].values[idx] * u[2].values[idx];
        u3_int += a2 * std::sqrt(a2);
    });
    out.cz_ratio = u3_int > 0.0 ? p1_int / u3_int : 0.0;
    return out;
}

struct HeatTestBalance {
    double lhs = 0.0;  ///< int |u(t0)|^2 phi + 2 iint |grad u|^2 phi
    std::map<std::string, double> rhs_terms;  ///< "linear", "cubic"
    double rhs = 0.0;
    double residual_rel = 0.0;
};

/// Backward heat kernel psi = (4 pi a)^{-3/2} exp(-|x|^2 / 4a) with
/// a = r^2 - (t - t0), so psi_t + Delta psi = 0 identically.
inline double heat_kernel_psi(double r, double t_rel, const Point3& x_rel) {
    double a = r * r - t_rel;
    double x2 = x_rel[0] * x_rel[0] + x_rel[1] * x_rel[1] + x_rel[2] * x_rel[2];
    return std::pow(4.0 * M_PI * a, -1.5) * std::exp(-x2 / (4.0 * a));
}

/// Every term of the heat-kernel-weighted local energy identity with
/// phi = chi * psi, chi the product of a spatial smoothstep (1 on B_{rho/4},
/// 0 outside B_{0.95 rho}) and a temporal smoothstep rising from the window
/// start.  For smooth exact flows lhs and rhs agree to discretization error.
inline HeatTestBalance heat_test_balance(const SpaceTimeField& st,
                                         const ParabolicCylinder& q_r,
                                         const ParabolicCylinder& q_rho) {
    if (!(q_r.r < 0.5 * q_rho.r))
        throw std::invalid_argument("heat_test_balance: need r < rho/2");
    le_detail::require_inside(st, q_rho);
    const Grid3& g = st.grid;
    const double rho = q_rho.r, r = q_r.r, t0 = q_rho.t;
    const Point3& xc = q_rho.x;
    const double t_start = t0 - rho * rho;
    const double ramp = 0.25 * rho * rho;

    auto chi_t = [&](double t) { return smoothstep3((t - t_start) / ramp); };
    auto chi_t_dot = [&](double t) {
        double u = (t - t_start) / ramp;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        double u2 = u * u, u3 = u2 * u;
        return 140.0 * u3 * (1.0 - 3.0 * u + 3.0 * u2 - u3) / ramp;
    };

    // Wide ramp: the cutoff's second derivative enters the balance and must
    // be resolvable by the midpoint sums, so spread it over most of the ball.
    const double inner = 0.25 * rho, outer = 0.95 * rho;
    // per-slice integrands
    std::vector<double> ts, diss, lin, cub;
    std::size_t top_idx = 0;
    for (std::size_t si = 0; si < st.times.size(); ++si) {
        double t = st.times[si];
        if (t < t_start - 1e-12 || t > t0 + 1e-12) continue;
        ts.push_back(t);
        top_idx = si;
        const VectorField& uu = st.u[si];
        const ScalarField& pp = st.P[si];
        ScalarField gsq = le_detail::grad_sq(uu);
        double a = r * r - (t - t0);
        double ct = chi_t(t), ctd = chi_t_dot(t);
        double s_diss = 0.0, s_lin = 0.0, s_cub = 0.0;
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    Point3 x = g.point(i, j, k);
                    Point3 xr{x[0] - xc[0], x[1] - xc[1], x[2] - xc[2]};
                    double rr = std::sqrt(xr[0] * xr[0] + xr[1] * xr[1] + xr[2] * xr[2]);
                    double cs = radial_cutoff(rr, inner, outer);
                    double psi = heat_kernel_psi(r, t - t0, xr);
                    double phi = cs * ct * psi;
                    double u2 = uu[0].values[idx] * uu[0].values[idx] +
                                uu[1].values[idx] * uu[1].values[idx] +
                                uu[2].values[idx] * uu[2].values[idx];
                    if (phi == 0.0 && cs == 0.0) continue;
                    s_diss += gsq.values[idx] * phi;
                    // grad psi = psi * (-x_rel / 2a); grad chi_s radial
                    double csd = radial_cutoff_deriv(rr, inner, outer);
                    // Delta chi_s = chi'' + 2 chi'/r
                    double csd2 = 0.0;
                    if (rr > inner && rr < outer) {
                        double w = (rr - inner) / (outer - inner);
                        csd2 = -smoothstep3_deriv2(w) / ((outer - inner) * (outer - inner));
                    }
                    double lap_cs = csd2 + (rr > 0 ? 2.0 * csd / rr : 0.0);
                    // phi_t + Delta phi = chi_t' cs psi + ct (Lap cs psi + 2 grad cs . grad psi)
                    double grad_cs_dot_grad_psi =
                        (rr > 0 ? csd * (-rr / (2.0 * a)) * psi : 0.0);
                    double heat_term =
                        ctd * cs * psi + ct * (lap_cs * psi + 2.0 * grad_cs_dot_grad_psi);
                    s_lin += u2 * heat_term;
                    // (|u|^2 + 2P) u . grad phi, grad phi = ct (grad cs psi + cs grad psi)
                    double u_dot_x = uu[0].values[idx] * xr[0] + uu[1].values[idx] * xr[1] +
                                     uu[2].values[idx] * xr[2];
                    double u_dot_gradphi =
                        ct * psi *
                        ((rr > 0 ? csd * u_dot_x / rr : 0.0) - cs * u_dot_x / (2.0 * a));
                    s_cub += (u2 + 2.0 * pp.values[idx]) * u_dot_gradphi;
                }
        double vol = g.cell_volume();
        diss.push_back(s_diss * vol);
        lin.push_back(s_lin * vol);
        cub.push_back(s_cub * vol);
    }
    if (ts.size() < 8)
        throw std::invalid_argument("heat_test_balance: time sampling too coarse");

    // top-slice energy term int |u(t0)|^2 phi(t0)
    double top = 0.0;
    {
        const VectorField& uu = st.u[top_idx];
        double t = st.times[top_idx];
        double ct = chi_t(t);
        std::size_t idx = 0;
        for (int k = 0; k < g.n; ++k)
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i, ++idx) {
                    Point3 x = g.point(i, j, k);
                    Point3 xr{x[0] - xc[0], x[1] - xc[1], x[2] - xc[2]};
                    double rr = std::sqrt(xr[0] * xr[0] + xr[1] * xr[1] + xr[2] * xr[2]);
                    double cs = radial_cutoff(rr, inner, outer);
                    if (cs == 0.0) continue;
                    double phi = cs * ct * heat_kernel_psi(r, t - t0, xr);
                    double u2 = uu[0].values[idx] * uu[0].values[idx] +
                                uu[1].values[idx] * uu[1].values[idx] +
                                uu[2].values[idx] * uu[2].values[idx];
                    top += u2 * phi;
                }
        top *= g.cell_volume();
    }

    HeatTestBalance out;
    out.lhs = top + 2.0 * le_detail::trapz_window(ts, diss, t_start, t0);
    out.rhs_terms["linear"] = le_detail::trapz_window(ts, lin, t_start, t0);
    out.rhs_terms["cubic"] = le_detail::trapz_window(ts, cub, t_start, t0);
    out.rhs = out.rhs_terms["linear"] + out.rhs_terms["cubic"];
    double scale = std::max(std::abs(out.lhs), std::abs(out.rhs));
    out.residual_rel = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
    return out;
}

/// One row of the decay ledger for an inequality of the form
/// lhs <= K * (term1 + term2); implied = lhs / (term1 + term2).
struct LedgerRow {
    double r = 0.0, rho = 0.0;
    double lhs = 0.0;
    double term1 = 0.0, term2 = 0.0;
    double implied_constant = 0.0;
    bool degenerate = false;
};

/// C(u,r) vs (r/rho) C(u,rho) + (rho/r)^{3/2} M^{3/2} A^{3/4}(u,rho).
inline LedgerRow cubic_decay_ledger(const SpaceTimeField& st, const ParabolicCylinder& q_r,
                                const ParabolicCylinder& q_rho, double M) {
    if (!(q_r.r < q_rho.r)) throw std::invalid_argument("cubic_decay_ledger: need r < rho");
    InvariantQuad small_q = invariants(st, q_r);
    InvariantQuad big_q = invariants(st, q_rho);
    LedgerRow row;
    row.r = q_r.r;
    row.rho = q_rho.r;
    row.lhs = small_q.C;
    row.term1 = (q_r.r / q_rho.r) * big_q.C;
    row.term2 = std::pow(q_rho.r / q_r.r, 1.5) * std::pow(M, 1.5) * std::pow(big_q.A, 0.75);
    double denom = row.term1 + row.term2;
    row.degenerate = denom <= 0.0;
    row.implied_constant = row.degenerate ? 0.0 : row.lhs / denom;
    return row;
}

/// D(P,r) vs (r/rho) D(P,rho) + (rho/r)^2 C(u,rho).
inline LedgerRow pressure_decay_ledger(const SpaceTimeField& st,
                                       const ParabolicCylinder& q_r,
                                       const ParabolicCylinder& q_rho) {
    if (!(q_r.r < q_rho.r))
        throw std::invalid_argument("pressure_decay_ledger: need r < rho");
    InvariantQuad small_q = invariants(st, q_r);
    InvariantQuad big_q = invariants(st, q_rho);
    LedgerRow row;
    row.r = q_r.r;
    row.rho = q_rho.r;
    row.lhs = small_q.D;
    row.term1 = (q_r.r / q_rho.r) * big_q.D;
    row.term2 = std::pow(q_rho.r / q_r.r, 2.0) * big_q.C;
    double denom = row.term1 + row.term2;
    row.degenerate = denom <= 0.0;
    row.implied_constant = row.degenerate ? 0.0 : row.lhs / denom;
    return row;
}

/// Iterates of G(theta^k rho) <= theta G(theta^{k-1} rho)
/// + C (1 + M^14) theta^{-168}, run as equality from G(rho).
inline std::vector<double> iterate_decay(double g_rho, double M, double theta,
                                         int k_max, double C = 1.0) {
    if (!(theta > 0.0 && theta <= 0.5))
        throw std::invalid_argument("iterate_decay: theta must be in (0, 1/2]");
    double forcing = C * (1.0 + std::pow(M, 14)) * std::pow(theta, -168.0);
    std::vector<double> out{g_rho};
    for (int k = 1; k <= k_max; ++k) out.push_back(theta * out.back() + forcing);
    return out;
}

enum class CknVerdict { regular_certified, inconclusive };

struct CknResult {
    CknVerdict verdict = CknVerdict::inconclusive;
    double c_plus_d = 0.0;
    double eps0 = 0.0;
};

/// Certifies regularity in Q_{r/2}(z) when C(u,r,z) + D(P,r,z) <= eps0.
/// One-sided: never claims singularity.
inline CknResult ckn_test(const SpaceTimeField& st, const ParabolicCylinder& q,
                          double eps0 = 0.01) {
    InvariantQuad iv = invariants(st, q);
    CknResult out;
    out.eps0 = eps0;
    out.c_plus_d = iv.C + iv.D;
    out.verdict = out.c_plus_d <= eps0 ? CknVerdict::regular_certified
                                       : CknVerdict::inconclusive;
    return out;
}

}  // namespace critns
