#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "critns/flow.hpp"
#include "critns/io.hpp"
#include "critns/report.hpp"

using namespace critns;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("critns_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("scalar and vector fields round-trip bit-exactly") {
    TempDir tmp;
    Grid3 g(8, 0.75);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ScalarField f(g);
    for (double& v : f.values) v = unif(rng);
    write_field(tmp.path / "f.cnf", f);
    ScalarField f2 = read_scalar_field(tmp.path / "f.cnf");
    REQUIRE(f2.grid.n == 8);
    REQUIRE(f2.grid.half_width == 0.75);
    REQUIRE(f2.values == f.values);

    VectorField u(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : u[c].values) v = unif(rng);
    write_field(tmp.path / "u.cnf", u);
    VectorField u2 = read_vector_field(tmp.path / "u.cnf");
    for (int c = 0; c < 3; ++c) REQUIRE(u2[c].values == u[c].values);

    // component-count mismatch is a structured error
    REQUIRE_THROWS_AS(read_vector_field(tmp.path / "f.cnf"), std::runtime_error);
}

TEST_CASE("corrupted files report the file and offset") {
    TempDir tmp;
    Grid3 g(8, 1.0);
    write_field(tmp.path / "f.cnf", ScalarField(g, 1.0));

    {  // bad magic
        std::fstream fsm(tmp.path / "f.cnf",
                         std::ios::binary | std::ios::in | std::ios::out);
        fsm.write("XXXX", 4);
    }
    try {
        read_scalar_field(tmp.path / "f.cnf");
        FAIL("expected a format error");
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        REQUIRE(msg.find("f.cnf") != std::string::npos);
        REQUIRE(msg.find("offset") != std::string::npos);
    }

    // truncated payload
    write_field(tmp.path / "g.cnf", ScalarField(g, 2.0));
    fs::resize_file(tmp.path / "g.cnf", 32 + 100);
    REQUIRE_THROWS_AS(read_scalar_field(tmp.path / "g.cnf"), std::runtime_error);
}

TEST_CASE("manifests parse key=value with comments") {
    TempDir tmp;
    {
        std::ofstream os(tmp.path / "m.txt");
        os << "# comment line\n"
           << "kind=beltrami\n"
           << "  n = 16  \n"
           << "\n"
           << "L=3.14 # trailing comment\n";
    }
    Manifest m = read_manifest(tmp.path / "m.txt");
    REQUIRE(m.at("kind") == "beltrami");
    REQUIRE(m.at("n") == "16");
    REQUIRE(m.at("L") == "3.14");

    {
        std::ofstream os(tmp.path / "bad.txt");
        os << "no equals sign here\n";
    }
    REQUIRE_THROWS_AS(read_manifest(tmp.path / "bad.txt"), std::runtime_error);
}

TEST_CASE("datasets round-trip through a directory") {
    TempDir tmp;
    FlowSpec bel = beltrami_flow();
    Grid3 g(8, 3.14159265358979);
    SpaceTimeField st = sample_flow(bel.flow, g, {0.0, 0.05, 0.1});
    save_dataset(tmp.path / "ds", st, {{"kind", "beltrami"}});
    SpaceTimeField back = load_dataset(tmp.path / "ds");
    REQUIRE(back.times.size() == 3);
    REQUIRE(back.grid.n == 8);
    for (std::size_t i = 0; i < 3; ++i) {
        REQUIRE(back.times[i] == Catch::Approx(st.times[i]).margin(1e-12));
        REQUIRE((back.u[i] - st.u[i]).max_abs() == 0.0);
    }
}

TEST_CASE("csv slice export has the documented header") {
    TempDir tmp;
    Grid3 g(8, 1.0);
    write_csv_slice(tmp.path / "s.csv", ScalarField(g, 1.5), 4);
    std::ifstream is(tmp.path / "s.csv");
    std::string line;
    std::getline(is, line);
    REQUIRE(line == "x,y,value");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    REQUIRE(rows == 64);
}

TEST_CASE("run configuration rejects unknown keys and round-trips") {
    RunConfig cfg;
    cfg.set("eps0", "0.02");
    REQUIRE(cfg.eps0 == Catch::Approx(0.02));
    REQUIRE_THROWS_AS(cfg.set("no_such_knob", "1"), std::invalid_argument);

    TempDir tmp;
    write_manifest(tmp.path / "cfg.txt", cfg.to_manifest());
    RunConfig back = RunConfig::from_file(tmp.path / "cfg.txt");
    REQUIRE(back.eps0 == Catch::Approx(0.02));
    REQUIRE(back.seed == cfg.seed);
    REQUIRE(back.scaling_n == cfg.scaling_n);
}

TEST_CASE("report emission is byte-stable") {
    RunConfig cfg;
    VerificationReport rep;
    rep.config = cfg;
    CheckResult c;
    c.id = "demo";
    c.anchor = "demo anchor";
    c.status = CheckStatus::pass;
    c.measured = {{"value", 1.2345678901234}};
    rep.checks.push_back(c);
    REQUIRE(emit_text(rep) == emit_text(rep));
    REQUIRE(emit_json(rep).find("\"all_passed\": true") != std::string::npos);
    REQUIRE(emit_csv(rep).rfind("check,status,measure,value\n", 0) == 0);
}
