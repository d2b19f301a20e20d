// Compares the serial and OpenMP Monte-Carlo drivers on the same plan (the
// reports must agree bit for bit; paths are merged in path-id order either
// way) and prints the one-path runtime table per scheme.
//
//   spde_bench [paths] [threads]

#include "spde/cli.hpp"
#include "spde/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double wall_seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool reports_equal(const spde::ErrorReport& a, const spde::ErrorReport& b) {
    if (a.levels.size() != b.levels.size()) return false;
    for (std::size_t i = 0; i < a.levels.size(); ++i)
        if (a.levels[i].rms_error != b.levels[i].rms_error ||
            a.levels[i].mc_stderr != b.levels[i].mc_stderr)
            return false;
    return a.fitted_slope == b.fitted_slope;
}

} // namespace

int main(int argc, char** argv) {
    const int paths = argc > 1 ? std::atoi(argv[1]) : 64;
    const int threads = argc > 2 ? std::atoi(argv[2]) : 0;

    const spde::ProblemSpec spec = spde::builtin(spde::BuiltinProblem::HeatSine);
    spde::LevelPlan plan;
    plan.levels = {{4, 16, 4}, {8, 64, 8}, {16, 256, 16}};
    plan.reference = {32, 1024, 32};
    plan.paths = paths;
    plan.base_seed = 42;

#ifdef _OPENMP
    const int max_threads = threads > 0 ? threads : omp_get_max_threads();
#else
    const int max_threads = 1;
    std::puts("built without OpenMP; parallel driver degenerates to the serial loop");
#endif

    std::printf("monte-carlo driver, heat-sine, %d paths, reference N=32 M=1024\n", paths);

    spde::ErrorReport serial, parallel;
    const double t_serial = wall_seconds([&] {
        serial = spde::strong_error_serial(spec, spde::SchemeKind::RungeKutta, plan);
    });
    const double t_parallel = wall_seconds([&] {
        parallel = spde::strong_error(spec, spde::SchemeKind::RungeKutta, plan, max_threads);
    });

    std::printf("  serial          %8.3f s\n", t_serial);
    std::printf("  openmp (%2d thr) %8.3f s   speedup %.2fx\n", max_threads, t_parallel,
                t_serial / t_parallel);
    std::printf("  reports identical: %s\n", reports_equal(serial, parallel) ? "yes" : "NO");
    for (const spde::LevelError& le : serial.levels)
        std::printf("    N=%-3d M=%-5d K=%-3d rms_error=%.6e (se %.1e)\n", le.level.n_modes,
                    le.level.steps, le.level.noise_modes, le.rms_error, le.mc_stderr);
    std::printf("  fitted slope %.3f\n\n", serial.fitted_slope);

    std::printf("one-path integration, median of 3 (euler M=N^3, others M=N^2, K=N)\n");
    const int n_values[] = {16, 32, 64};
    for (const spde::RuntimeRow& row : spde::runtime_table(spec, n_values, 3)) {
        std::printf("  %-12s N=%-4d M=%-8d draws=%-10lld %10.4f s\n",
                    std::string(spde::scheme_name(row.scheme)).c_str(), row.n_modes,
                    row.steps, row.rng_draws, row.seconds);
    }
    return reports_equal(serial, parallel) ? 0 : 1;
}
