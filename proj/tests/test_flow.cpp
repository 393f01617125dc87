#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "critns/flow.hpp"

using namespace critns;

TEST_CASE("reference flows carry the right solution flags") {
    REQUIRE(beltrami_flow().is_solution);
    REQUIRE(shear_mode().is_solution);
    REQUIRE_FALSE(taylor_green().is_solution);
}

TEST_CASE("shear mode decays exactly under the stepper") {
    FlowSpec sh = shear_mode(0.3);
    Grid3 g(16, std::numbers::pi);
    SpaceTimeField init = sample_flow(sh.flow, g, {0.0});
    StepperResult sr = spectral_step(init.u[0], 0.02, 10);
    SpaceTimeField ref = sample_flow(sh.flow, g, {0.2});
    REQUIRE((sr.history.u.back() - ref.u[0]).max_abs() < 1e-12);
    REQUIRE(sr.cfl_max < 0.5);
}

TEST_CASE("integrating-factor stepper reproduces the exact decaying flow") {
    FlowSpec bel = beltrami_flow();
    Grid3 g(16, std::numbers::pi);
    SpaceTimeField init = sample_flow(bel.flow, g, {0.0});
    StepperResult sr = spectral_step(init.u[0], 0.01, 10);
    SpaceTimeField ref = sample_flow(bel.flow, g, {0.1});
    REQUIRE((sr.history.u.back() - ref.u[0]).max_abs() < 1e-12);
    // the flow stays divergence-free along the way
    for (const auto& u : sr.history.u) REQUIRE(divergence(u).max_abs() < 1e-10);
}

TEST_CASE("explicit stepper converges at second order") {
    FlowSpec bel = beltrami_flow();
    Grid3 g(16, std::numbers::pi);
    SpaceTimeField init = sample_flow(bel.flow, g, {0.0});
    SpaceTimeField ref = sample_flow(bel.flow, g, {0.1});
    auto err = [&](double dt) {
        int steps = int(std::lround(0.1 / dt));
        StepperResult sr = spectral_step(init.u[0], dt, steps, steps, 0.5,
                                         ViscScheme::explicit_rk2);
        return (sr.history.u.back() - ref.u[0]).max_abs();
    };
    double e1 = err(0.01), e2 = err(0.005);
    REQUIRE(e1 / e2 == Catch::Approx(4.0).margin(0.5));
}

TEST_CASE("CFL violations are rejected") {
    FlowSpec bel = beltrami_flow(5.0, 5.0, 5.0);
    Grid3 g(16, std::numbers::pi);
    SpaceTimeField init = sample_flow(bel.flow, g, {0.0});
    REQUIRE_THROWS_AS(spectral_step(init.u[0], 0.1, 4), std::runtime_error);
}

TEST_CASE("dealiasing removes the top third of modes") {
    Grid3 g(16, 1.0);
    ScalarField f(g);
    for (int i = 0; i < g.n; ++i) f.at(i, 0, 0) = 1.0;  // broadband
    SpectralRep s = transform(f);
    dealias(s);
    bool any_high = false;
    for_each_mode(s, [&](int kx, int ky, int kz, std::complex<double>& c) {
        if ((std::abs(kx) > g.n / 3 || std::abs(ky) > g.n / 3 ||
             std::abs(kz) > g.n / 3) &&
            std::abs(c) > 0.0)
            any_high = true;
    });
    REQUIRE_FALSE(any_high);
}

TEST_CASE("profile ladder reports the dyadic schedule and no-solution flag") {
    // n must resolve the deepest rung: at delta = 2^{-5/2} the bump support
    // is ~0.13, which a 16-cell grid on this box would miss entirely
    ProfileLadder lad = profile_ladder(1.0 / 3.0, 1.0, 2, 5, Grid3(32, 1.5));
    REQUIRE_FALSE(lad.is_solution);
    REQUIRE(lad.times.size() == 4);
    for (std::size_t i = 0; i < lad.times.size(); ++i) {
        double gap = 1.0 - lad.times[i];
        REQUIRE(lad.deltas[i] == Catch::Approx(std::sqrt(gap)).epsilon(1e-12));
        REQUIRE(gap == Catch::Approx(std::pow(2.0, -double(2 + i))).epsilon(1e-12));
    }
    // amplitudes grow toward the singular time
    REQUIRE(lad.fields.back().max_abs() > lad.fields.front().max_abs());
}

TEST_CASE("Taylor-Green data is divergence-free") {
    FlowSpec tg = taylor_green();
    Grid3 g(16, std::numbers::pi);
    SpaceTimeField st = sample_flow(tg.flow, g, {0.0});
    REQUIRE(divergence(st.u[0]).max_abs() < 1e-10);
}
