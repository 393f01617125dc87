#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "critns/littlewood_paley.hpp"
#include "critns/norms.hpp"

using namespace critns;

TEST_CASE("dyadic blocks partition the energy") {
    Grid3 g(32, 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = unif(rng);
    const int j_max = int(std::log2(g.n / 4.0));  // = 3
    double total_sq = lp_norm(f, 2.0);
    total_sq *= total_sq;
    double sum_sq = 0.0;
    for (int j = -1; j <= j_max; ++j) {
        double b = lp_norm(lp_block_decompose(f, j, j_max), 2.0);
        sum_sq += b * b;
    }
    REQUIRE(sum_sq == Catch::Approx(total_sq).epsilon(1e-6));
}

TEST_CASE("a single mode lands in its dyadic blocks") {
    Grid3 g(64, 1.0);
    ScalarField f(g);
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                f.at(i, j, k) = std::sin(2.0 * std::numbers::pi * g.coord(i));
    const int j_max = 4;
    double total_sq = lp_norm(f, 2.0);
    total_sq *= total_sq;
    // physical frequency 2*pi falls inside the annuli of blocks j = 2 and 3
    // (support of block j is 3/4 * 2^j < xi < 8/3 * 2^j) and nowhere else
    double in_sq = 0.0, out_sq = 0.0;
    for (int j = -1; j <= j_max; ++j) {
        double b = lp_norm(lp_block_decompose(f, j, j_max), 2.0);
        if (j == 2 || j == 3)
            in_sq += b * b;
        else
            out_sq += b * b;
    }
    REQUIRE(in_sq == Catch::Approx(total_sq).epsilon(1e-6));
    REQUIRE(out_sq < 1e-9 * total_sq);
}

TEST_CASE("unresolvable block indices are rejected") {
    Grid3 g(16, 1.0);
    ScalarField f(g, 1.0);
    REQUIRE_THROWS_AS(lp_block_decompose(f, 1, 5), std::invalid_argument);
}

TEST_CASE("blocks of a constant stay in the low-pass piece") {
    Grid3 g(16, 1.0);
    ScalarField f(g, 4.0);
    const int j_max = 2;
    double low = lp_norm(lp_block_decompose(f, -1, j_max),
                         std::numeric_limits<double>::infinity());
    REQUIRE(low == Catch::Approx(4.0).margin(1e-10));
    for (int j = 0; j <= j_max; ++j)
        REQUIRE(lp_norm(lp_block_decompose(f, j, j_max),
                        std::numeric_limits<double>::infinity()) < 1e-10);
}

TEST_CASE("mean-carrying blocks of ln|x| grow linearly in the index") {
    std::vector<double> sups = log_block_growth_1d(1024, 0.5, 4, 7);
    REQUIRE(sups.size() == 4);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < sups.size(); ++i) {
        double ratio = sups[i] / double(4 + int(i));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    REQUIRE((hi - lo) / (0.5 * (hi + lo)) < 0.15);
}

TEST_CASE("besov sup-norm profile of a smooth field decays across blocks") {
    Grid3 g(32, 1.0);
    ScalarField f(g);
    for (int k = 0; k < g.n; ++k)
        for (int j = 0; j < g.n; ++j)
            for (int i = 0; i < g.n; ++i)
                f.at(i, j, k) = std::cos(std::numbers::pi * g.coord(i)) *
                                std::cos(std::numbers::pi * g.coord(j));
    std::vector<double> prof = besov_b0infinf_profile(f, 3);
    REQUIRE(prof.size() == 5);  // j = -1 .. 3
    // energy sits at |k| = sqrt(2): the top block carries almost nothing
    double top = *std::max_element(prof.begin(), prof.end());
    REQUIRE(top > 0.0);
    REQUIRE(prof.back() < 1e-8 * top);
}
