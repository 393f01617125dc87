#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "critns/norms.hpp"

using namespace critns;

namespace {
TimeSeries random_series(std::uint64_t seed, int n = 40) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    TimeSeries ts;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
        t += 0.01 + 0.05 * unif(rng);
        ts.times.push_back(t);
        ts.values.push_back(3.0 * unif(rng));
    }
    return ts;
}

/// Classical L^r norm of the step-function view of the series.
double classical_lr(const TimeSeries& ts, double r) {
    std::vector<double> vals, w;
    detail::step_cells(ts, ts.times.front(), ts.times.back(), vals, w);
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) s += std::pow(vals[i], r) * w[i];
    return std::pow(s, 1.0 / r);
}
}  // namespace

TEST_CASE("time series validation") {
    TimeSeries ts;
    REQUIRE_THROWS_AS(ts.check(), std::invalid_argument);
    ts.times = {0.0, 0.0};
    ts.values = {1.0, 1.0};
    REQUIRE_THROWS_AS(ts.check(), std::invalid_argument);
    ts.times = {0.0, 1.0};
    ts.values = {1.0, -1.0};
    REQUIRE_THROWS_AS(ts.check(), std::invalid_argument);
}

TEST_CASE("weak norm is dominated by the classical norm") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        TimeSeries ts = random_series(seed);
        for (double r : {1.5, 2.0, 3.0})
            REQUIRE(lorentz_weak_norm(ts, r) <= classical_lr(ts, r) * (1.0 + 1e-12));
    }
}

TEST_CASE("weak-L2 of a constant series is c * sqrt(span)") {
    TimeSeries ts;
    for (int i = 0; i <= 10; ++i) {
        ts.times.push_back(0.1 * i);
        ts.values.push_back(2.0);
    }
    REQUIRE(lorentz_weak_norm(ts, 2.0) == Catch::Approx(2.0 * std::sqrt(1.0)).epsilon(1e-12));
}

TEST_CASE("layer-cake bound holds on random windows") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        TimeSeries ts = random_series(seed, 60);
        double span = ts.times.back() - ts.times.front();
        for (double frac : {0.3, 0.6, 0.9}) {
            LayerCakeCheck c =
                layer_cake_bound_check(ts, ts.times.back(), std::sqrt(frac * span));
            REQUIRE(c.satisfied);
        }
    }
}

TEST_CASE("layer-cake ratio of a constant series is the constant-gap value") {
    TimeSeries ts;
    for (int i = 0; i <= 100; ++i) {
        ts.times.push_back(0.01 * i);
        ts.values.push_back(1.5);
    }
    LayerCakeCheck c = layer_cake_bound_check(ts, 1.0, 1.0);
    // lhs = c^{3/2} |window|/sqrt(r);  M = c sqrt(|window|);
    // rhs = 2*3^{3/4} c^{3/2} |window|^{3/4} -> ratio = r^{3/2}/(2*3^{3/4} r^{3/2})
    REQUIRE(c.lhs / c.rhs == Catch::Approx(1.0 / (2.0 * std::pow(3.0, 0.75))).epsilon(1e-10));
}

TEST_CASE("borderline inverse-sqrt series nearly saturates the layer-cake bound") {
    TimeSeries ts;
    const int N = 400;
    for (int i = 0; i < N; ++i) {
        double gap = std::pow(10.0, -6.0 * i / (N - 1));
        ts.times.push_back(1.0 - gap);
        ts.values.push_back(1.0 / std::sqrt(gap));
    }
    double t_end = ts.times.back();
    LayerCakeCheck c = layer_cake_bound_check(ts, t_end, std::sqrt(t_end));
    REQUIRE(c.satisfied);
    REQUIRE(c.lhs / c.rhs >= 0.5);
}

TEST_CASE("Lp norms of a constant field") {
    Grid3 g(8, 1.0);
    ScalarField f(g, 2.0);
    double vol = 8.0;  // box [-1,1)^3
    REQUIRE(lp_norm(f, 2.0) == Catch::Approx(2.0 * std::sqrt(vol)).epsilon(1e-12));
    REQUIRE(lp_norm(f, std::numeric_limits<double>::infinity()) == 2.0);
    REQUIRE_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("BMO estimate: zero for constants, bounded by twice the sup") {
    Grid3 g(16, 1.0);
    BallSampler sampler = BallSampler::lattice(g, 0.4, 2, 0.2, 0.7);
    ScalarField c(g, 5.0);
    REQUIRE(bmo_norm(c, sampler) == 0.0);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = unif(rng);
    double sup = f.max_abs();
    BmoReport rep = bmo_norm_report(f, sampler);
    REQUIRE(rep.balls_used > 0);
    REQUIRE(rep.value <= 2.0 * sup);
    REQUIRE(rep.value > 0.0);
}

TEST_CASE("BMO estimate grows monotonically with sampler refinement") {
    Grid3 g(16, 1.0);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = unif(rng);
    // the fine sampler's centers and radii are supersets of the coarse ones
    double coarse = bmo_norm(f, BallSampler::lattice(g, 0.4, 1, 0.3, 0.6, 2));
    double fine = bmo_norm(f, BallSampler::lattice(g, 0.4, 2, 0.3, 0.6, 4));
    REQUIRE(fine >= coarse - 1e-15);  // strictly more balls sampled
}

TEST_CASE("Morrey norm of a constant-speed field scales with the largest ball") {
    Grid3 g(16, 1.0);
    VectorField u(g);
    for (double& v : u[0].values) v = 1.0;
    BallSampler s;
    s.centers = {{0.0, 0.0, 0.0}};
    s.radii = {0.5};
    // r^{-1/2} (int_{B_r} 1)^{1/2} = sqrt(4 pi r^2 / 3)
    double expect = std::sqrt(4.0 * M_PI / 3.0 * 0.25);
    REQUIRE(morrey_21_norm(u, s) == Catch::Approx(expect).epsilon(0.05));
}
