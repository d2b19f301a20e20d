// Monte-Carlo strong-error estimation and model diagnostics.
//
// Errors are measured against a fine reference trajectory computed with the
// Runge-Kutta scheme on the same underlying noise path: each path samples one
// lattice at the reference resolution, every level re-integrates a
// time-coarsened, mode-truncated view of it, and the terminal fields are
// compared in coefficient space after zero-padding (the grids of different N
// do not nest, the coefficients do).
//
// Paths are independent work items.  The parallel drivers farm paths out with
// OpenMP, store each path's contribution in its own slot and merge in path-id
// order afterwards, so results are independent of scheduling and identical to
// the serial drivers bit for bit.

#pragma once

#include "spde/problems.hpp"
#include "spde/schemes.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace spde {

struct Level {
    int n_modes = 0;
    int steps = 0;
    int noise_modes = 0;
};

struct LevelPlan {
    std::vector<Level> levels; // sorted by n_modes ascending
    Level reference;
    int paths = 100;
    std::uint64_t base_seed = 42;

    void validate() const; // throws std::invalid_argument on violation
};

struct LevelError {
    Level level;
    double rms_error = 0.0;
    double mc_stderr = 0.0;
};

inline constexpr double kUnsetSlope = std::numeric_limits<double>::quiet_NaN();

struct ErrorReport {
    std::vector<LevelError> levels;
    double fitted_slope = kUnsetSlope;
    double slope_stderr = kUnsetSlope;
    double predicted_slope = kUnsetSlope;
};

struct FitResult {
    double slope = kUnsetSlope;
    double slope_stderr = kUnsetSlope;
};

// Ordinary least squares of log2(error) against log2(resolution).
FitResult fit_order(std::span<const std::pair<double, double>> points);

ErrorReport strong_error(const ProblemSpec& spec, SchemeKind scheme, const LevelPlan& plan,
                         int threads = 0);
ErrorReport strong_error_serial(const ProblemSpec& spec, SchemeKind scheme,
                                const LevelPlan& plan);

struct SchemeComparisonLevel {
    Level level;
    double err_rk = 0.0;
    double err_mil = 0.0;
    double err_euler = 0.0;
    double rk_mil_distance = 0.0; // rms terminal distance on common noise
};

struct SchemeComparison {
    std::vector<SchemeComparisonLevel> levels;
    double slope_rk = kUnsetSlope;
    double slope_mil = kUnsetSlope;
    double slope_euler = kUnsetSlope;
    double max_rel_gap_rk_mil = 0.0; // max over levels of |err_rk - err_mil| / err_mil
    double predicted_slope = kUnsetSlope;
};

// All three schemes on identical coarsened lattices per path.
SchemeComparison compare_schemes(const ProblemSpec& spec, const LevelPlan& plan,
                                 int threads = 0);
SchemeComparison compare_schemes_serial(const ProblemSpec& spec, const LevelPlan& plan);

struct GGCheckSample {
    double h;
    double lipschitz_constant; // max over pairs of |GG(v,h)-GG(w,h)|_HS^2 / |v-w|^2
    double remainder_constant; // max over fields of |GG1(v,h)|_HS^2 / (h (1 + max|v|^4))
};

struct GGCheckReport {
    std::vector<GGCheckSample> samples; // one per h, h = 2^-2 .. 2^-10
    double lipschitz_spread = 1.0;      // max/min of the constants over h
    double remainder_spread = 1.0;
    bool lipschitz_ok = false; // spread within a factor of 2
    bool remainder_ok = false;
    bool passed() const { return lipschitz_ok && remainder_ok; }
};

// Brute-force check that the difference-quotient operator behaves like the
// derivative pair it replaces: truncated Hilbert-Schmidt norms
// sum_{i,j<=K} mu_i mu_j |B(eta_i, eta_j)|_H^2 evaluated pointwise on the
// grid, over `trials` seeded random field pairs.
GGCheckReport check_gg_assumption(const ProblemSpec& spec, int noise_modes,
                                  const SineBasis& basis, int trials, std::uint64_t seed);

struct RuntimeRow {
    SchemeKind scheme;
    int n_modes = 0;
    int steps = 0;
    int noise_modes = 0;
    long long rng_draws = 0; // steps * noise_modes per path
    double seconds = 0.0;    // median wall seconds for one path
};

// One-path wall times per scheme and N with the scheme's usual pairing
// (Euler M = N^3, Milstein/RungeKutta M = N^2, K = N).
std::vector<RuntimeRow> runtime_table(const ProblemSpec& spec, std::span<const int> n_values,
                                      int repeats, std::uint64_t seed = 42);

// Slope annotation: the three predicted error contributions (spatial cutoff,
// noise truncation, time stepping) evaluated across the plan's levels and
// fitted the same way as the measurements.
double predicted_level_slope(const ProblemSpec& spec, const LevelPlan& plan);

} // namespace spde
