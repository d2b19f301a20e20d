// End-to-end acceptance runs at desk scale.  Each criterion prints one
// PASS/FAIL line; the exit code is the number of failures.  The timing
// comparison at the end is informational only (absolute seconds are
// hardware-bound).

#include "spde/cli.hpp"
#include "spde/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace spde;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), format, a, b, c);
    return buf;
}

LevelPlan heat_sine_plan(int paths) {
    LevelPlan plan;
    plan.levels = {{4, 16, 4}, {8, 64, 8}, {16, 256, 16}, {32, 1024, 32}};
    plan.reference = {64, 4096, 64};
    plan.paths = paths;
    plan.base_seed = 42;
    return plan;
}

// 1. Runge-Kutta order on the sine-noise problem: slope of log2 error
//    against log2 N within [-1.8, -1.2] at M = N^2, K = N.
void criterion_rk_order() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    const ErrorReport rep = strong_error(spec, SchemeKind::RungeKutta, heat_sine_plan(100));
    const bool ok = rep.fitted_slope >= -1.8 && rep.fitted_slope <= -1.2;
    report(1, ok,
           fmt("runge-kutta heat-sine slope %.3f (se %.3f), want [-1.8, -1.2]",
               rep.fitted_slope, rep.slope_stderr));
}

// 2. Milstein parity on common noise: same slope window and the rk/milstein
//    errors within 15% of each other at every level.
void criterion_milstein_parity() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    const SchemeComparison cmp = compare_schemes(spec, heat_sine_plan(100));
    const bool slope_ok = cmp.slope_mil >= -1.8 && cmp.slope_mil <= -1.2;
    const bool gap_ok = cmp.max_rel_gap_rk_mil <= 0.15;
    report(2, slope_ok && gap_ok,
           fmt("milstein slope %.3f, max |err_rk-err_mil|/err_mil %.4f (want slope in "
               "[-1.8, -1.2], gap <= 0.15)",
               cmp.slope_mil, cmp.max_rel_gap_rk_mil));
}

// 3. Linear implicit Euler at M = N^3, K = N: slope within [-1.9, -1.1] and
//    the emitted rng_draws column exactly N^4 per path.
void criterion_euler_order() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    LevelPlan plan;
    plan.levels = {{4, 64, 4}, {8, 512, 8}, {16, 4096, 16}};
    plan.reference = {32, 32768, 32};
    plan.paths = 50;
    plan.base_seed = 42;
    const ErrorReport rep = strong_error(spec, SchemeKind::Euler, plan);
    const bool slope_ok = rep.fitted_slope >= -1.9 && rep.fitted_slope <= -1.1;

    CliConfig cfg = parse_args({"convergence", "--scheme", "euler", "--levels", "4,8,16",
                                "--m", "n3", "--paths", "50"});
    std::stringstream csv;
    emit_report(csv, rep, cfg);
    bool draws_ok = true;
    std::string line;
    std::getline(csv, line); // header
    for (const Level& l : plan.levels) {
        std::getline(csv, line);
        const long long n = l.n_modes;
        const std::string want = "," + std::to_string(n * n * n * n) + ",0";
        if (line.find(want) == std::string::npos) draws_ok = false;
    }
    report(3, slope_ok && draws_ok,
           fmt("euler heat-sine slope %.3f (want [-1.9, -1.1]); rng_draws column = N^4:",
               rep.fitted_slope) +
               (draws_ok ? " yes" : " NO"));
}

// 4. Cosine-noise problem where A and Q have different eigenfunctions:
//    slope within [-2.4, -1.4].
void criterion_cosine_order() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatCosine);
    LevelPlan plan;
    plan.levels = {{2, 4, 2}, {4, 16, 4}, {8, 64, 8}, {16, 256, 16}};
    plan.reference = {32, 1024, 32};
    plan.paths = 100;
    plan.base_seed = 42;
    const ErrorReport rep = strong_error(spec, SchemeKind::RungeKutta, plan);
    const bool ok = rep.fitted_slope >= -2.4 && rep.fitted_slope <= -1.4;
    report(4, ok,
           fmt("runge-kutta heat-cosine slope %.3f (se %.3f), want [-2.4, -1.4]",
               rep.fitted_slope, rep.slope_stderr));
}

// 5. Difference-quotient operator diagnostics: fitted Lipschitz and
//    remainder constants stable within a factor of 2 over h = 2^-2..2^-10.
void criterion_gg_assumption() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    const SineBasis basis(32, spec.diffusivity);
    const GGCheckReport rep = check_gg_assumption(spec, 16, basis, 50, 42);
    report(5, rep.passed(),
           fmt("heat-sine constants over h range: lipschitz spread %.3f, remainder spread "
               "%.3f (want <= 2)",
               rep.lipschitz_spread, rep.remainder_spread));
}

// 6. Exact identities of the discrete machinery.
void criterion_exact_identities() {
    bool ok = true;
    std::string detail;

    {
        const SineBasis basis(64, 1.0);
        std::vector<double> z(64);
        for (int i = 0; i < 64; ++i) z[i] = std::sin(0.83 * i) + 0.2 * i / 64.0;
        const std::vector<double> back = idst(basis, dst(basis, z));
        double err = 0.0;
        for (int i = 0; i < 64; ++i) err = std::max(err, std::abs(back[i] - z[i]));
        if (err > 1e-12) ok = false;
        detail += fmt("round trip %.2e", err);
    }
    {
        const SineBasis basis(32, 1.0);
        std::vector<double> c(32);
        for (int i = 0; i < 32; ++i) c[i] = std::cos(1.7 * i) / (1.0 + i);
        const SpectralField cf(c);
        const PhysicalField v = to_physical(cf, basis);
        double quad = 0.0;
        for (double x : v.values) quad += x * x;
        const double gap = std::abs(h_norm(cf) - std::sqrt(quad / 33.0));
        if (gap > 1e-12) ok = false;
        detail += fmt(", parseval %.2e", gap);
    }
    {
        const ProblemSpec lin = builtin(BuiltinProblem::LinearG);
        const SineBasis basis(16, lin.diffusivity);
        const double h = lin.horizon / 256.0;
        const BrownianLattice lat = sample_lattice(256, 16, h, 42, 0);
        const SpectralField rk = integrate(lin, {16, 256, 16, SchemeKind::RungeKutta}, lat, basis);
        const SpectralField mil = integrate(lin, {16, 256, 16, SchemeKind::Milstein}, lat, basis);
        double dist = 0.0;
        for (int j = 0; j < 16; ++j) dist += (rk.coeffs[j] - mil.coeffs[j]) * (rk.coeffs[j] - mil.coeffs[j]);
        dist = std::sqrt(dist);
        if (dist > 1e-12) ok = false;
        detail += fmt(", linear-g rk/mil distance %.2e", dist);
    }
    {
        ProblemSpec spec = builtin(BuiltinProblem::ZeroNoise);
        spec.drift = [](double, double) { return 0.0; };
        spec.initial = [](double x) { return std::sqrt(2.0) * std::sin(3.14159265358979323846 * x); };
        const SineBasis basis(8, spec.diffusivity);
        const double h = spec.horizon / 64.0;
        const BrownianLattice lat = sample_lattice(64, 8, h, 42, 0);
        const SpectralField y = integrate(spec, {8, 64, 8, SchemeKind::RungeKutta}, lat, basis);
        const double expect = std::exp(-basis.eigenvalues()[0] * spec.horizon);
        const double gap = std::abs(y.coeffs[0] - expect);
        if (gap > 1e-12) ok = false;
        detail += fmt(", zero-noise semigroup %.2e", gap);
    }
    report(6, ok, detail + " (want all <= 1e-12)");
}

// 7. Per-step work: M f-sweeps and 2M g-sweeps per runge-kutta path; M each
//    of f, g, dg/dy for milstein.
void criterion_evaluation_counts() {
    const int n = 8, m = 64;
    ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    long f_calls = 0, g_calls = 0, dg_calls = 0;
    const Coefficient base_f = spec.drift, base_g = spec.diffusion, base_dg = spec.diffusion_dy;
    spec.drift = [&](double x, double y) { ++f_calls; return base_f(x, y); };
    spec.diffusion = [&](double x, double y) { ++g_calls; return base_g(x, y); };
    spec.diffusion_dy = [&](double x, double y) { ++dg_calls; return base_dg(x, y); };
    const SineBasis basis(n, spec.diffusivity);
    const double h = spec.horizon / m;
    const BrownianLattice lat = sample_lattice(m, n, h, 42, 0);

    integrate(spec, {n, m, n, SchemeKind::RungeKutta}, lat, basis);
    const bool rk_ok = f_calls == static_cast<long>(m) * n && g_calls == 2L * m * n && dg_calls == 0;
    const long rk_f = f_calls / n, rk_g = g_calls / n;

    f_calls = g_calls = dg_calls = 0;
    integrate(spec, {n, m, n, SchemeKind::Milstein}, lat, basis);
    const bool mil_ok = f_calls == static_cast<long>(m) * n && g_calls == static_cast<long>(m) * n &&
                        dg_calls == static_cast<long>(m) * n;

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "runge-kutta sweeps f=%ld g=%ld (want %d, %d); milstein f=g=dg/dy=%ld (want %d)",
                  rk_f, rk_g, m, 2 * m, f_calls / n, m);
    report(7, rk_ok && mil_ok, buf);
}

// 8. Determinism of the CLI surface: identical argv twice, byte-identical CSV.
void criterion_cli_determinism() {
    const std::string p1 = "/tmp/spde_acceptance_1.csv";
    const std::string p2 = "/tmp/spde_acceptance_2.csv";
    const std::vector<std::string> base = {"convergence", "--problem", "heat-sine",
                                           "--levels", "4,8", "--paths", "20",
                                           "--seed", "7", "--out", p1};
    std::vector<std::string> second = base;
    second.back() = p2;
    const int c1 = run_cli(parse_args(base), std::cerr);
    const int c2 = run_cli(parse_args(second), std::cerr);
    const auto read = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = read(p1), b = read(p2);
    const bool ok = c1 == 0 && c2 == 0 && !a.empty() && a == b;
    report(8, ok, fmt("exit codes %g/%g, files byte-identical: ", c1, c2) + (a == b ? "yes" : "NO"));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

// Informational: one-path runtime ordering between the bracket schemes.
void report_runtime_ordering() {
    const ProblemSpec spec = builtin(BuiltinProblem::HeatSine);
    const int ns[] = {64};
    double rk = 0.0, mil = 0.0;
    for (const RuntimeRow& row : runtime_table(spec, ns, 3))
        if (row.scheme == SchemeKind::RungeKutta) rk = row.seconds;
        else if (row.scheme == SchemeKind::Milstein) mil = row.seconds;
    std::printf("[REPORT] one-path seconds at N=64: runge-kutta %.4f vs milstein %.4f (%s)\n",
                rk, mil, rk <= mil ? "rk <= milstein" : "rk > milstein, not gating");
}

} // namespace

int main() {
    criterion_rk_order();
    criterion_milstein_parity();
    criterion_euler_order();
    criterion_cosine_order();
    criterion_gg_assumption();
    criterion_exact_identities();
    criterion_evaluation_counts();
    criterion_cli_determinism();
    report_runtime_ordering();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all acceptance criteria passed\n");
    return failures;
}
