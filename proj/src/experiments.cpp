#include "spde/experiments.hpp"

#include "spde/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spde {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

double sq(double x) { return x * x; }

// (1/(N+1)) sum_k v_k^2, the grid quadrature of |v|_H^2.
double grid_norm_sq(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc / static_cast<double>(v.size() + 1);
}

// rms + Monte-Carlo standard error of sqrt(mean) via the delta method.
std::pair<double, double> rms_of(std::span<const double> squared) {
    const std::size_t n = squared.size();
    double mean = 0.0;
    for (double s : squared) mean += s;
    mean /= static_cast<double>(n);
    const double rms = std::sqrt(mean);
    if (n < 2 || rms == 0.0) return {rms, 0.0};
    double var = 0.0;
    for (double s : squared) var += sq(s - mean);
    var /= static_cast<double>(n - 1);
    const double se_mean = std::sqrt(var / static_cast<double>(n));
    return {rms, se_mean / (2.0 * rms)};
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Runs body(p) for p in [0, paths), parallel over paths when asked to.  Any
// exception aborts the run, reporting the smallest failing path id.
template <typename Body>
void for_each_path(int paths, int threads, bool parallel, Body&& body) {
    std::vector<std::string> failure(static_cast<std::size_t>(paths));
    std::vector<char> failed(static_cast<std::size_t>(paths), 0);
    if (parallel) {
        const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
        for (int p = 0; p < paths; ++p) {
            try {
                body(p);
            } catch (const std::exception& e) {
                failed[p] = 1;
                failure[p] = e.what();
            }
        }
        (void)nthreads;
    } else {
        for (int p = 0; p < paths; ++p) {
            try {
                body(p);
            } catch (const std::exception& e) {
                failed[p] = 1;
                failure[p] = e.what();
            }
        }
    }
    for (int p = 0; p < paths; ++p)
        if (failed[p])
            throw std::runtime_error("path " + std::to_string(p) + " failed: " + failure[p]);
}

// squared coefficient-space distance after zero-padding to the reference size
double padded_sq_distance(const SpectralField& ref, const SpectralField& y) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ref.size(); ++j) {
        const double c = j < y.size() ? y.coeffs[j] : 0.0;
        acc += sq(ref.coeffs[j] - c);
    }
    return acc;
}

ErrorReport strong_error_impl(const ProblemSpec& spec, SchemeKind scheme,
                              const LevelPlan& plan, int threads, bool parallel) {
    plan.validate();
    if (scheme == SchemeKind::Milstein)
        require(spec.has_diffusion_dy(), "strong_error: Milstein needs diffusion_dy");

    const std::size_t n_levels = plan.levels.size();
    const SineBasis ref_basis(plan.reference.n_modes, spec.diffusivity);
    std::vector<SineBasis> level_basis;
    level_basis.reserve(n_levels);
    for (const Level& l : plan.levels) level_basis.emplace_back(l.n_modes, spec.diffusivity);

    const double h_ref = spec.horizon / static_cast<double>(plan.reference.steps);
    const RunConfig ref_cfg{plan.reference.n_modes, plan.reference.steps,
                            plan.reference.noise_modes, SchemeKind::RungeKutta};

    std::vector<double> sq_err(static_cast<std::size_t>(plan.paths) * std::max<std::size_t>(n_levels, 1));
    for_each_path(plan.paths, threads, parallel, [&](int p) {
        const BrownianLattice fine = sample_lattice(plan.reference.steps,
                                                    plan.reference.noise_modes, h_ref,
                                                    plan.base_seed,
                                                    static_cast<std::uint64_t>(p));
        const SpectralField ref = integrate(spec, ref_cfg, fine, ref_basis);
        for (std::size_t li = 0; li < n_levels; ++li) {
            const Level& l = plan.levels[li];
            const BrownianLattice coarse = coarsen_time(fine, plan.reference.steps / l.steps);
            const RunConfig cfg{l.n_modes, l.steps, l.noise_modes, scheme};
            const SpectralField y = integrate(spec, cfg, coarse, level_basis[li]);
            sq_err[static_cast<std::size_t>(p) * n_levels + li] = padded_sq_distance(ref, y);
        }
    });

    ErrorReport report;
    std::vector<std::pair<double, double>> points;
    std::vector<double> column(static_cast<std::size_t>(plan.paths));
    for (std::size_t li = 0; li < n_levels; ++li) {
        for (int p = 0; p < plan.paths; ++p)
            column[p] = sq_err[static_cast<std::size_t>(p) * n_levels + li];
        const auto [rms, se] = rms_of(column);
        report.levels.push_back({plan.levels[li], rms, se});
        if (rms > 0.0)
            points.emplace_back(static_cast<double>(plan.levels[li].n_modes), rms);
    }
    if (points.size() >= 2) {
        const FitResult fit = fit_order(points);
        report.fitted_slope = fit.slope;
        report.slope_stderr = fit.slope_stderr;
    }
    if (spec.regularity) report.predicted_slope = predicted_level_slope(spec, plan);
    return report;
}

SchemeComparison compare_schemes_impl(const ProblemSpec& spec, const LevelPlan& plan,
                                      int threads, bool parallel) {
    plan.validate();
    require(spec.has_diffusion_dy(), "compare_schemes: problem needs diffusion_dy");

    const std::size_t n_levels = plan.levels.size();
    const SineBasis ref_basis(plan.reference.n_modes, spec.diffusivity);
    std::vector<SineBasis> level_basis;
    level_basis.reserve(n_levels);
    for (const Level& l : plan.levels) level_basis.emplace_back(l.n_modes, spec.diffusivity);

    const double h_ref = spec.horizon / static_cast<double>(plan.reference.steps);
    const RunConfig ref_cfg{plan.reference.n_modes, plan.reference.steps,
                            plan.reference.noise_modes, SchemeKind::RungeKutta};

    // per path and level: squared errors for rk / mil / euler plus rk-mil
    const std::size_t stride = 4 * std::max<std::size_t>(n_levels, 1);
    std::vector<double> acc(static_cast<std::size_t>(plan.paths) * stride);
    for_each_path(plan.paths, threads, parallel, [&](int p) {
        const BrownianLattice fine = sample_lattice(plan.reference.steps,
                                                    plan.reference.noise_modes, h_ref,
                                                    plan.base_seed,
                                                    static_cast<std::uint64_t>(p));
        const SpectralField ref = integrate(spec, ref_cfg, fine, ref_basis);
        for (std::size_t li = 0; li < n_levels; ++li) {
            const Level& l = plan.levels[li];
            const BrownianLattice coarse = coarsen_time(fine, plan.reference.steps / l.steps);
            const RunConfig rk{l.n_modes, l.steps, l.noise_modes, SchemeKind::RungeKutta};
            const RunConfig mil{l.n_modes, l.steps, l.noise_modes, SchemeKind::Milstein};
            const RunConfig euler{l.n_modes, l.steps, l.noise_modes, SchemeKind::Euler};
            const SpectralField y_rk = integrate(spec, rk, coarse, level_basis[li]);
            const SpectralField y_mil = integrate(spec, mil, coarse, level_basis[li]);
            const SpectralField y_euler = integrate(spec, euler, coarse, level_basis[li]);
            double dist = 0.0;
            for (std::size_t j = 0; j < y_rk.size(); ++j)
                dist += sq(y_rk.coeffs[j] - y_mil.coeffs[j]);
            double* slot = acc.data() + static_cast<std::size_t>(p) * stride + 4 * li;
            slot[0] = padded_sq_distance(ref, y_rk);
            slot[1] = padded_sq_distance(ref, y_mil);
            slot[2] = padded_sq_distance(ref, y_euler);
            slot[3] = dist;
        }
    });

    SchemeComparison out;
    std::vector<std::pair<double, double>> pts_rk, pts_mil, pts_euler;
    std::vector<double> column(static_cast<std::size_t>(plan.paths));
    for (std::size_t li = 0; li < n_levels; ++li) {
        SchemeComparisonLevel row;
        row.level = plan.levels[li];
        const auto collect = [&](int which) {
            for (int p = 0; p < plan.paths; ++p)
                column[p] = acc[static_cast<std::size_t>(p) * stride + 4 * li + which];
            return rms_of(column).first;
        };
        row.err_rk = collect(0);
        row.err_mil = collect(1);
        row.err_euler = collect(2);
        row.rk_mil_distance = collect(3);
        out.levels.push_back(row);
        const double n = static_cast<double>(row.level.n_modes);
        if (row.err_rk > 0.0) pts_rk.emplace_back(n, row.err_rk);
        if (row.err_mil > 0.0) pts_mil.emplace_back(n, row.err_mil);
        if (row.err_euler > 0.0) pts_euler.emplace_back(n, row.err_euler);
        if (row.err_mil > 0.0)
            out.max_rel_gap_rk_mil = std::max(
                out.max_rel_gap_rk_mil, std::abs(row.err_rk - row.err_mil) / row.err_mil);
    }
    if (pts_rk.size() >= 2) out.slope_rk = fit_order(pts_rk).slope;
    if (pts_mil.size() >= 2) out.slope_mil = fit_order(pts_mil).slope;
    if (pts_euler.size() >= 2) out.slope_euler = fit_order(pts_euler).slope;
    if (spec.regularity) out.predicted_slope = predicted_level_slope(spec, plan);
    return out;
}

} // namespace

void LevelPlan::validate() const {
    require(paths >= 1, "LevelPlan: paths must be >= 1");
    require(reference.n_modes >= 1 && reference.steps >= 1 && reference.noise_modes >= 1,
            "LevelPlan: reference resolution must be positive");
    int prev_n = 0;
    for (const Level& l : levels) {
        require(l.n_modes >= 1 && l.steps >= 1 && l.noise_modes >= 1,
                "LevelPlan: level resolution must be positive");
        require(l.n_modes >= prev_n, "LevelPlan: levels must be sorted by n_modes");
        prev_n = l.n_modes;
        require(reference.steps % l.steps == 0,
                "LevelPlan: reference steps not divisible by level steps (level M=" +
                    std::to_string(l.steps) + ", reference M=" +
                    std::to_string(reference.steps) + ")");
        require(reference.noise_modes >= l.noise_modes,
                "LevelPlan: reference noise modes below a level's");
        require(reference.n_modes >= l.n_modes, "LevelPlan: reference n_modes below a level's");
    }
}

FitResult fit_order(std::span<const std::pair<double, double>> points) {
    require(points.size() >= 2, "fit_order: need at least two points");
    const std::size_t n = points.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(points[i].first > 0.0 && points[i].second > 0.0,
                "fit_order: resolutions and errors must be positive");
        x[i] = std::log2(points[i].first);
        y[i] = std::log2(points[i].second);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += sq(x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, "fit_order: resolutions are all equal");
    const double slope = sxy / sxx;
    if (n == 2) return {slope, 0.0};
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) rss += sq(y[i] - intercept - slope * x[i]);
    const double sigma2 = rss / static_cast<double>(n - 2);
    return {slope, std::sqrt(sigma2 / sxx)};
}

ErrorReport strong_error(const ProblemSpec& spec, SchemeKind scheme, const LevelPlan& plan,
                         int threads) {
    return strong_error_impl(spec, scheme, plan, threads, true);
}

ErrorReport strong_error_serial(const ProblemSpec& spec, SchemeKind scheme,
                                const LevelPlan& plan) {
    return strong_error_impl(spec, scheme, plan, 1, false);
}

SchemeComparison compare_schemes(const ProblemSpec& spec, const LevelPlan& plan, int threads) {
    return compare_schemes_impl(spec, plan, threads, true);
}

SchemeComparison compare_schemes_serial(const ProblemSpec& spec, const LevelPlan& plan) {
    return compare_schemes_impl(spec, plan, 1, false);
}

GGCheckReport check_gg_assumption(const ProblemSpec& spec, int noise_modes,
                                  const SineBasis& basis, int trials, std::uint64_t seed) {
    require(noise_modes >= 1 && noise_modes <= basis.n_modes(),
            "check_gg_assumption: need 1 <= noise_modes <= basis modes");
    require(trials >= 1, "check_gg_assumption: trials must be >= 1");
    require(spec.has_diffusion_dy(), "check_gg_assumption: problem needs diffusion_dy");

    const int n = basis.n_modes();
    const int n1 = n + 1;

    // eta_j on the grid and the weights mu_j, j = 1..K
    std::vector<double> mu(static_cast<std::size_t>(noise_modes));
    std::vector<double> eta(static_cast<std::size_t>(noise_modes) * n);
    const double sqrt2 = std::sqrt(2.0);
    for (int j = 1; j <= noise_modes; ++j) {
        mu[j - 1] = spec.noise.mu_at(j);
        for (int k = 1; k <= n; ++k)
            eta[static_cast<std::size_t>(j - 1) * n + (k - 1)] =
                sqrt2 * ((spec.noise.family == EigenFamily::SineEigen)
                             ? reduced_sine(static_cast<long long>(j) * k, n1)
                             : reduced_cosine(static_cast<long long>(j) * k, n1));
    }

    // |B|_HS^2 = sum_{i,j} mu_i mu_j |factor * eta_i * eta_j|_H^2 on the grid
    const auto hs_norm_sq = [&](std::span<const double> factor) {
        double acc = 0.0;
        std::vector<double> field(static_cast<std::size_t>(n));
        for (int i = 0; i < noise_modes; ++i)
            for (int j = 0; j < noise_modes; ++j) {
                if (mu[i] == 0.0 || mu[j] == 0.0) continue;
                const double* ei = eta.data() + static_cast<std::size_t>(i) * n;
                const double* ej = eta.data() + static_cast<std::size_t>(j) * n;
                for (int k = 0; k < n; ++k) field[k] = factor[k] * ei[k] * ej[k];
                acc += mu[i] * mu[j] * grid_norm_sq(field);
            }
        return acc;
    };

    std::vector<double> h_values;
    for (int e = 2; e <= 10; ++e) h_values.push_back(std::ldexp(1.0, -e));

    // seeded random field pairs, reused for every h
    std::vector<PhysicalField> vs, ws;
    for (int t = 0; t < trials; ++t) {
        std::vector<double> v(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            v[k] = keyed_gaussian(seed, static_cast<std::uint64_t>(t), 0,
                                  static_cast<std::uint32_t>(k + 1));
            w[k] = keyed_gaussian(seed, static_cast<std::uint64_t>(t), 1,
                                  static_cast<std::uint32_t>(k + 1));
        }
        vs.emplace_back(std::move(v));
        ws.emplace_back(std::move(w));
    }

    GGCheckReport report;
    for (double h : h_values) {
        double c_lip = 0.0, c_rem = 0.0;
        for (int t = 0; t < trials; ++t) {
            const PhysicalField& v = vs[t];
            const PhysicalField& w = ws[t];
            const GGFactor ggv = gg_factor(spec, v, h, basis);
            const GGFactor ggw = gg_factor(spec, w, h, basis);

            std::vector<double> diff(static_cast<std::size_t>(n));
            double dist_sq = 0.0;
            for (int k = 0; k < n; ++k) {
                diff[k] = ggv.values.values[k] - ggw.values.values[k];
                dist_sq += sq(v.values[k] - w.values[k]);
            }
            dist_sq /= static_cast<double>(n + 1);
            if (dist_sq > 0.0) c_lip = std::max(c_lip, hs_norm_sq(diff) / dist_sq);

            const PhysicalField gprime_g = milstein_factor(spec, v, basis);
            std::vector<double> rem(static_cast<std::size_t>(n));
            double max_v = 0.0;
            for (int k = 0; k < n; ++k) {
                rem[k] = ggv.values.values[k] - gprime_g.values[k];
                max_v = std::max(max_v, std::abs(v.values[k]));
            }
            const double denom = h * (1.0 + max_v * max_v * max_v * max_v);
            c_rem = std::max(c_rem, hs_norm_sq(rem) / denom);
        }
        // below this the constants are rounding noise of an identically zero
        // operator; snap so spreads of noise do not masquerade as drift
        constexpr double kNoiseFloor = 1e-20;
        if (c_lip < kNoiseFloor) c_lip = 0.0;
        if (c_rem < kNoiseFloor) c_rem = 0.0;
        report.samples.push_back({h, c_lip, c_rem});
    }

    const auto spread = [&](auto member) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const GGCheckSample& s : report.samples) {
            lo = std::min(lo, s.*member);
            hi = std::max(hi, s.*member);
        }
        return lo > 0.0 ? hi / lo : (hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
    };
    report.lipschitz_spread = spread(&GGCheckSample::lipschitz_constant);
    report.remainder_spread = spread(&GGCheckSample::remainder_constant);
    report.lipschitz_ok = report.lipschitz_spread <= 2.0;
    report.remainder_ok = report.remainder_spread <= 2.0;
    return report;
}

std::vector<RuntimeRow> runtime_table(const ProblemSpec& spec, std::span<const int> n_values,
                                      int repeats, std::uint64_t seed) {
    require(repeats >= 1, "runtime_table: repeats must be >= 1");
    std::vector<RuntimeRow> rows;
    const SchemeKind schemes[] = {SchemeKind::Euler, SchemeKind::Milstein,
                                  SchemeKind::RungeKutta};
    for (SchemeKind scheme : schemes) {
        if (scheme == SchemeKind::Milstein && !spec.has_diffusion_dy()) continue;
        for (int n : n_values) {
            require(n >= 1, "runtime_table: n must be >= 1");
            const long long m = (scheme == SchemeKind::Euler)
                                    ? static_cast<long long>(n) * n * n
                                    : static_cast<long long>(n) * n;
            require(m <= std::numeric_limits<int>::max(), "runtime_table: step count overflow");
            const RunConfig cfg{n, static_cast<int>(m), n, scheme};
            const SineBasis basis(n, spec.diffusivity);
            std::vector<double> times(static_cast<std::size_t>(repeats));
            for (int r = 0; r < repeats; ++r) {
                const auto t0 = std::chrono::steady_clock::now();
                integrate_path(spec, cfg, basis, seed, static_cast<std::uint64_t>(r));
                const auto t1 = std::chrono::steady_clock::now();
                times[r] = std::chrono::duration<double>(t1 - t0).count();
            }
            std::sort(times.begin(), times.end());
            const double median = times[times.size() / 2];
            rows.push_back({scheme, n, static_cast<int>(m), n,
                            m * static_cast<long long>(n), median});
        }
    }
    return rows;
}

double predicted_level_slope(const ProblemSpec& spec, const LevelPlan& plan) {
    if (!spec.regularity || plan.levels.size() < 2) return kNaN;
    const PredictedRates rates = predicted_rates(spec);
    std::vector<std::pair<double, double>> points;
    for (const Level& l : plan.levels) {
        const double spatial = std::pow(static_cast<double>(l.n_modes + 1), -rates.spatial);
        const double noise = std::pow(spec.noise.mu_at(l.noise_modes + 1), rates.noise);
        const double temporal = std::pow(static_cast<double>(l.steps), -rates.temporal);
        points.emplace_back(static_cast<double>(l.n_modes), spatial + noise + temporal);
    }
    return fit_order(points).slope;
}

} // namespace spde
