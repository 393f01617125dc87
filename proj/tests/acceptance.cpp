// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Criteria 1-8 run the corresponding suite checks at their pinned
// problem sizes; criterion 9 runs the reduced suite twice and compares the
// emitted report bytes.

#include <chrono>
#include <cstdio>
#include <string>

#include "critns/report.hpp"

using namespace critns;

namespace {

int failures = 0;

void line(int k, const char* title, bool ok, const std::string& detail) {
    std::printf("criterion %d [%s] %s: %s\n", k, ok ? "PASS" : "FAIL", title,
                detail.c_str());
    if (!ok) ++failures;
}

std::string summarize(const CheckResult& c) {
    std::string s;
    for (const auto& [k, v] : c.measured) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s=%.6g ", k.c_str(), v);
        s += buf;
    }
    if (!c.note.empty()) s += "note: " + c.note;
    return s;
}

void run(int k, const char* title, CheckResult (*fn)(const RunConfig&),
         const RunConfig& cfg) {
    try {
        CheckResult c = fn(cfg);
        line(k, title, c.status == CheckStatus::pass, summarize(c));
    } catch (const std::exception& e) {
        line(k, title, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    RunConfig cfg;  // pinned default sizes

    run(1, "scaling laws of the near-singular profile", check_profile_scaling, cfg);
    run(2, "closed-form quadrature and origin bounds", check_closed_form_bounds, cfg);
    run(3, "layer-cake window bound", check_layer_cake, cfg);
    run(4, "log-field dyadic block growth", check_block_growth, cfg);
    run(5, "exact-flow energy equality", check_energy_equality, cfg);
    run(6, "cylinder invariant properties", check_cylinder_invariants, cfg);
    run(7, "dimension estimators", check_dimension_estimators, cfg);
    run(8, "operator oracles and stepper order", check_operator_oracles, cfg);

    try {
        RunConfig quick = RunConfig::quick();
        VerificationReport r1 = run_suite(quick);
        VerificationReport r2 = run_suite(quick);
        bool same = emit_text(r1) == emit_text(r2) && emit_json(r1) == emit_json(r2) &&
                    emit_csv(r1) == emit_csv(r2);
        char buf[64];
        std::snprintf(buf, sizeof buf, "report_bytes=%zu", emit_text(r1).size());
        line(9, "suite determinism (double run)", same, buf);
    } catch (const std::exception& e) {
        line(9, "suite determinism (double run)", false,
             std::string("exception: ") + e.what());
    }

    return failures == 0 ? 0 : 1;
}
