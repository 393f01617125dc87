#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "critns/energy_measure.hpp"
#include "critns/flow.hpp"

using namespace critns;

TEST_CASE("energy density mass equals the squared L2 norm") {
    Grid3 g(16, std::numbers::pi);
    FlowSpec bel = beltrami_flow();
    SpaceTimeField st = sample_flow(bel.flow, g, {0.0});
    MeasureApprox m = energy_density(st.u[0]);
    double l2 = l2_norm(st.u[0]);
    REQUIRE(m.total_mass() == Catch::Approx(l2 * l2).epsilon(1e-10));
}

TEST_CASE("atoms carry their mass exactly") {
    Grid3 g(16, 1.0);
    MeasureApprox m(g);
    m.atoms.push_back({{0.2, 0.0, 0.0}, 2.5});
    REQUIRE(m.total_mass() == Catch::Approx(2.5));
    REQUIRE(m.ball_mass({0.2, 0.0, 0.0}, 0.1) == Catch::Approx(2.5));
    REQUIRE(m.ball_mass({-0.5, 0.0, 0.0}, 0.1) == 0.0);
}

TEST_CASE("weak-star pairing stabilizes for a convergent ladder") {
    Grid3 g(8, 1.0);
    std::vector<MeasureApprox> seq;
    for (int k = 0; k < 8; ++k) {
        MeasureApprox m(g);
        for (double& d : m.density) d = 1.0 + std::pow(0.5, k);  // -> 1
        seq.push_back(m);
    }
    std::vector<ScalarField> tests{ScalarField(g, 1.0)};
    WeakStarResult w = weak_star_limit(seq, tests, 0.1);
    REQUIRE(w.converged);
    // limit density is the Cesaro mean of the tail half, close to 1
    REQUIRE(w.limit.total_mass() == Catch::Approx(8.0).epsilon(0.05));
    REQUIRE(w.pairings.back()[0] == Catch::Approx(8.0 * (1.0 + 1.0 / 128.0)).epsilon(1e-10));
}

TEST_CASE("local dimension: atom 0, volume 3") {
    Grid3 g(32, 1.0);
    MeasureApprox atom(g);
    atom.atoms.push_back({{0.0, 0.0, 0.0}, 1.0});
    DimensionEstimate a = local_dimension(atom, {0, 0, 0}, {0.15, 0.2, 0.3, 0.4});
    REQUIRE(std::abs(a.slope) < 0.1);

    MeasureApprox vol(g);
    for (double& d : vol.density) d = 1.0;
    DimensionEstimate v = local_dimension(vol, {0, 0, 0}, {0.15, 0.21, 0.3, 0.42, 0.6});
    REQUIRE(v.slope == Catch::Approx(3.0).margin(0.1));
}

TEST_CASE("local dimension of the empty measure is infinite") {
    Grid3 g(16, 1.0);
    MeasureApprox empty(g);
    DimensionEstimate e = local_dimension(empty, {0, 0, 0}, {0.3, 0.5});
    REQUIRE(e.infinite);
    REQUIRE_THROWS_AS(local_dimension(empty, {0, 0, 0}, {0.01, 0.3}),
                      std::invalid_argument);  // radius below resolution floor
}

TEST_CASE("concentration dimension separates segment from volume") {
    Grid3 g(32, 1.0);
    MeasureApprox tube(g);
    for (int k = g.n / 2 - 1; k <= g.n / 2; ++k)
        for (int j = g.n / 2 - 1; j <= g.n / 2; ++j)
            for (int i = 0; i < g.n; ++i) tube.density[g.index(i, j, k)] = 1.0;
    REQUIRE(concentration_dimension(tube, 0.9).dimension == Catch::Approx(1.0).margin(0.2));

    MeasureApprox vol(g);
    for (double& d : vol.density) d = 1.0;
    REQUIRE(concentration_dimension(vol, 0.9).dimension == Catch::Approx(3.0).margin(0.2));

    MeasureApprox zero(g);
    ConcentrationEstimate z = concentration_dimension(zero, 0.9);
    REQUIRE(z.zero_measure);
    REQUIRE(z.dimension == 3.0);
    REQUIRE_THROWS_AS(concentration_dimension(vol, 0.0), std::invalid_argument);
}

TEST_CASE("global energy residual vanishes for the decaying exact flow") {
    Grid3 g(16, std::numbers::pi);
    FlowSpec bel = beltrami_flow();
    std::vector<double> times;
    for (int i = 0; i <= 64; ++i) times.push_back(0.1 * i / 64.0);
    SpaceTimeField st = sample_flow(bel.flow, g, times);
    TimeSeries res = global_energy_residual(st);
    double e0 = l2_norm(st.u.front());
    for (double v : res.values) REQUIRE(v / (e0 * e0) < 1e-5);
}

TEST_CASE("global energy residual detects a non-solution") {
    Grid3 g(16, std::numbers::pi);
    // undamped field: energy constant but dissipation positive
    AnalyticFlow frozen;
    frozen.velocity = [](double, const Point3& x) {
        return Point3{std::sin(x[1]), 0.0, 0.0};
    };
    frozen.pressure = [](double, const Point3&) { return 0.0; };
    std::vector<double> times;
    for (int i = 0; i <= 32; ++i) times.push_back(0.5 * i / 32.0);
    TimeSeries res = global_energy_residual(sample_flow(frozen, g, times));
    double e0 = l2_norm(sample_flow(frozen, g, {0.0}).u[0]);
    REQUIRE(res.values.back() / (e0 * e0) > 0.1);
}
