// Command-line front end: every library operation as a subcommand, plus the
// consolidated verification suite.
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or data
// error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critns/energy_measure.hpp"
#include "critns/flow.hpp"
#include "critns/io.hpp"
#include "critns/littlewood_paley.hpp"
#include "critns/local_energy.hpp"
#include "critns/norms.hpp"
#include "critns/profile.hpp"
#include "critns/report.hpp"

namespace {

using namespace critns;

std::string g_config_path;
std::uint64_t g_seed = 0;
bool g_seed_set = false;
std::string g_out;
int g_threads = 1;

RunConfig effective_config() {
    RunConfig cfg;
    if (!g_config_path.empty()) cfg = RunConfig::from_file(g_config_path);
    if (g_seed_set) cfg.seed = g_seed;
    if (!g_out.empty()) cfg.out_dir = g_out;
    return cfg;
}

void print_kv(const std::string& k, double v) {
    std::printf("%s=%.12g\n", k.c_str(), v);
}

int cmd_gen(const std::string& kind, int n, double t_final, int slices,
            const std::string& out, double amp, double s) {
    if (out.empty()) {
        std::cerr << "gen: --out is required\n";
        return 2;
    }
    SpaceTimeField st;
    Manifest extra{{"kind", kind}};
    if (kind == "beltrami" || kind == "taylor-green" || kind == "shear") {
        FlowSpec spec = kind == "beltrami"    ? beltrami_flow(amp, amp, amp)
                        : kind == "taylor-green" ? taylor_green(amp)
                                                 : shear_mode(amp);
        Grid3 g(n, spec.natural_half_width);
        std::vector<double> times;
        for (int i = 0; i <= slices; ++i) times.push_back(t_final * i / slices);
        st = sample_flow(spec.flow, g, times);
        st.is_solution = spec.is_solution;
    } else if (kind == "profile-ladder") {
        ProfileLadder lad = profile_ladder(s, t_final, 2, 2 + slices - 1, Grid3(n, 1.5));
        st.grid = Grid3(n, 1.5);
        st.times = lad.times;
        st.is_solution = false;
        for (auto& f : lad.fields) {
            st.P.push_back(pressure_from_velocity(f));
            st.u.push_back(std::move(f));
        }
    } else {
        std::cerr << "gen: unknown kind '" << kind << "'\n";
        return 2;
    }
    save_dataset(out, st, extra);
    std::printf("wrote %zu slices to %s\n", st.times.size(), out.c_str());
    return 0;
}

int cmd_profile_scan(double s, int n, int k_lo, int k_hi) {
    Grid3 g(n, 1.5);
    std::vector<double> deltas;
    for (int k = k_lo; k <= k_hi; ++k) deltas.push_back(std::pow(2.0, -k));
    ScalingReport rep = scan_scaling(s, deltas, g);
    std::printf("delta,l2_sq,h1_sq,linf,linf_grid,bmo\n");
    for (const auto& r : rep.rows)
        std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.delta, r.l2_sq,
                    r.h1_sq, r.linf, r.linf_grid, r.bmo);
    print_kv("l2_slope", rep.l2_slope.slope);
    print_kv("h1_slope", rep.h1_slope.slope);
    print_kv("linf_slope", rep.linf_slope.slope);
    print_kv("bmo_scaled_max", rep.bmo_scaled_max);
    print_kv("bmo_scaled_min", rep.bmo_scaled_min);
    return 0;
}

int cmd_norms(const std::string& in) {
    FieldHeader h = peek_field(in);
    BallSampler sampler;
    if (h.components == 3) {
        VectorField u = read_vector_field(in);
        sampler = BallSampler::lattice(u.grid, 0.3 * u.grid.half_width, 2,
                                       4.0 * u.grid.spacing(), 0.5 * u.grid.half_width);
        print_kv("l2", lp_norm(u, 2.0));
        print_kv("l3", lp_norm(u, 3.0));
        print_kv("linf", lp_norm(u, std::numeric_limits<double>::infinity()));
        print_kv("bmo", bmo_norm(u, sampler));
        print_kv("morrey21", morrey_21_norm(u, sampler));
    } else {
        ScalarField f = read_scalar_field(in);
        sampler = BallSampler::lattice(f.grid, 0.3 * f.grid.half_width, 2,
                                       4.0 * f.grid.spacing(), 0.5 * f.grid.half_width);
        print_kv("l2", lp_norm(f, 2.0));
        print_kv("linf", lp_norm(f, std::numeric_limits<double>::infinity()));
        print_kv("bmo", bmo_norm(f, sampler));
    }
    return 0;
}

int cmd_besov_ln(const std::string& in, int n, int j_lo, int j_hi) {
    if (in.empty()) {
        std::vector<double> sups = log_block_growth_1d(n, 0.5, j_lo, j_hi);
        std::printf("j,sup,sup_over_j\n");
        for (std::size_t i = 0; i < sups.size(); ++i) {
            int j = j_lo + int(i);
            std::printf("%d,%.12g,%.12g\n", j, sups[i], sups[i] / j);
        }
    } else {
        ScalarField f = read_scalar_field(in);
        std::vector<double> sups = besov_b0infinf_profile(f, j_hi);
        std::printf("j,sup\n");
        for (std::size_t i = 0; i < sups.size(); ++i)
            std::printf("%d,%.12g\n", int(i) - 1, sups[i]);
    }
    return 0;
}

ParabolicCylinder make_cyl(double t, double x, double y, double z, double r) {
    return ParabolicCylinder{t, {x, y, z}, r};
}

int cmd_invariants(const std::string& in, double t, double x, double y, double z,
                   double r) {
    SpaceTimeField st = load_dataset(in);
    InvariantQuad iv = invariants(st, make_cyl(t, x, y, z, r));
    print_kv("A", iv.A);
    print_kv("B", iv.B);
    print_kv("C", iv.C);
    print_kv("D", iv.D);
    return 0;
}

int cmd_ckn(const std::string& in, double t, double x, double y, double z, double r,
            double eps0) {
    SpaceTimeField st = load_dataset(in);
    CknResult res = ckn_test(st, make_cyl(t, x, y, z, r), eps0);
    print_kv("c_plus_d", res.c_plus_d);
    print_kv("eps0", res.eps0);
    std::printf("verdict=%s\n", res.verdict == CknVerdict::regular_certified
                                    ? "regular_certified"
                                    : "inconclusive");
    return 0;
}

int cmd_ledger(const std::string& in, double t, double x, double y, double z,
               double r, double rho, double M) {
    SpaceTimeField st = load_dataset(in);
    ParabolicCylinder qr = make_cyl(t, x, y, z, r);
    ParabolicCylinder qrho = make_cyl(t, x, y, z, rho);
    LedgerRow c = cubic_decay_ledger(st, qr, qrho, M);
    LedgerRow d = pressure_decay_ledger(st, qr, qrho);
    std::printf("row,r,rho,lhs,term1,term2,implied_constant\n");
    std::printf("cubic,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", c.r, c.rho, c.lhs,
                c.term1, c.term2, c.implied_constant);
    std::printf("pressure,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", d.r, d.rho, d.lhs,
                d.term1, d.term2, d.implied_constant);
    return 0;
}

int cmd_dims(const std::string& in, double fraction) {
    FieldHeader h = peek_field(in);
    MeasureApprox m;
    if (h.components == 3) {
        m = energy_density(read_vector_field(in));
    } else {
        ScalarField f = read_scalar_field(in);
        m = MeasureApprox(f.grid);
        m.density = f.values;
    }
    double hmin = 2.5 * m.grid.spacing();
    std::vector<double> radii;
    for (double r = hmin; r <= 0.8 * m.grid.half_width; r *= 1.5) radii.push_back(r);
    DimensionEstimate est = local_dimension(m, {0, 0, 0}, radii);
    ConcentrationEstimate conc = concentration_dimension(m, fraction);
    print_kv("total_mass", m.total_mass());
    print_kv("local_dimension_at_origin", est.slope);
    print_kv("concentration_dimension", conc.dimension);
    return 0;
}

int cmd_energy_residual(const std::string& in) {
    SpaceTimeField st = load_dataset(in);
    TimeSeries res = global_energy_residual(st);
    double e0 = l2_norm(st.u.front());
    std::printf("t,residual,relative\n");
    for (std::size_t i = 0; i < res.times.size(); ++i)
        std::printf("%.12g,%.12g,%.12g\n", res.times[i], res.values[i],
                    res.values[i] / (e0 * e0));
    return 0;
}

int cmd_suite(bool quick) {
    RunConfig cfg = quick ? RunConfig::quick() : RunConfig();
    if (!g_config_path.empty()) {
        cfg = RunConfig::from_file(g_config_path);
    }
    if (g_seed_set) cfg.seed = g_seed;
    if (!g_out.empty()) cfg.out_dir = g_out;
    VerificationReport rep = run_suite(cfg);
    std::fputs(emit_text(rep).c_str(), stdout);
    if (!cfg.out_dir.empty()) emit(rep, cfg.out_dir);
    return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"critical-norm and local-energy diagnostics for incompressible flow"};
    app.require_subcommand(1);
    app.add_option("--config", g_config_path, "key=value config file");
    app.add_option("--seed", g_seed, "random seed override")
        ->each([](const std::string&) { g_seed_set = true; });
    app.add_option("--out", g_out, "output directory");
    app.add_option("--threads", g_threads, "worker threads (reserved)");

    std::string kind = "beltrami", in, out;
    int n = 64, slices = 32, j_lo = 4, j_hi = 9, k_lo = 2, k_hi = 6;
    double t_final = 1.0, amp = 1.0, s = 1.0 / 3.0;
    double t = 0.5, x = 0, y = 0, z = 0, r = 0.5, rho = 1.0, M = 1.0;
    double eps0 = 0.01, fraction = 0.9;
    bool quick = false;

    auto* gen = app.add_subcommand("gen", "sample a reference flow to a dataset");
    gen->add_option("--kind", kind, "beltrami|taylor-green|shear|profile-ladder");
    gen->add_option("--grid", n);
    gen->add_option("--t", t_final);
    gen->add_option("--slices", slices);
    gen->add_option("--amp", amp);
    gen->add_option("--s", s);
    gen->add_option("--out", out);

    auto* scan = app.add_subcommand("profile-scan", "scaling ladder of the singular profile");
    scan->add_option("--s", s);
    scan->add_option("--grid", n);
    scan->add_option("--k-lo", k_lo);
    scan->add_option("--k-hi", k_hi);

    auto* norms = app.add_subcommand("norms", "critical norms of a stored field");
    norms->add_option("--in", in)->required();

    auto* besov = app.add_subcommand("besov-ln", "dyadic block sup-norms; default ln|x| growth");
    int bn = 4096;  // 1-D log-growth diagnostic needs room above the top block
    besov->add_option("--in", in);
    besov->add_option("--grid", bn);
    besov->add_option("--j-lo", j_lo);
    besov->add_option("--j-hi", j_hi);

    auto* inv = app.add_subcommand("invariants", "cylinder quantities A,B,C,D");
    inv->add_option("--in", in)->required();
    inv->add_option("--t", t);
    inv->add_option("--x", x);
    inv->add_option("--y", y);
    inv->add_option("--z", z);
    inv->add_option("--r", r);

    auto* ckn = app.add_subcommand("ckn-test", "smallness-implies-regularity predicate");
    ckn->add_option("--in", in)->required();
    ckn->add_option("--t", t);
    ckn->add_option("--x", x);
    ckn->add_option("--y", y);
    ckn->add_option("--z", z);
    ckn->add_option("--r", r);
    ckn->add_option("--eps0", eps0);

    auto* led = app.add_subcommand("ledger", "decay-inequality implied constants");
    led->add_option("--in", in)->required();
    led->add_option("--t", t);
    led->add_option("--x", x);
    led->add_option("--y", y);
    led->add_option("--z", z);
    led->add_option("--r", r);
    led->add_option("--rho", rho);
    led->add_option("--M", M);

    auto* dims = app.add_subcommand("dims", "energy-measure dimension estimates");
    dims->add_option("--in", in)->required();
    dims->add_option("--fraction", fraction);

    auto* eres = app.add_subcommand("energy-residual", "global energy-equality residual");
    eres->add_option("--in", in)->required();

    auto* suite = app.add_subcommand("suite", "run the full verification suite");
    suite->add_flag("--quick", quick, "reduced problem sizes");

    // allow the global flags (--config/--seed/--out/--threads) after the
    // subcommand name as well as before it
    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
        sc->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(kind, n, t_final, slices, out, amp, s);
        if (scan->parsed()) return cmd_profile_scan(s, n, k_lo, k_hi);
        if (norms->parsed()) return cmd_norms(in);
        if (besov->parsed()) return cmd_besov_ln(in, bn, j_lo, j_hi);
        if (inv->parsed()) return cmd_invariants(in, t, x, y, z, r);
        if (ckn->parsed()) return cmd_ckn(in, t, x, y, z, r, eps0);
        if (led->parsed()) return cmd_ledger(in, t, x, y, z, r, rho, M);
        if (dims->parsed()) return cmd_dims(in, fraction);
        if (eres->parsed()) return cmd_energy_residual(in);
        if (suite->parsed()) return cmd_suite(quick);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
