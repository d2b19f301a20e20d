#include "spde/noise.hpp"

#include "spde/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace spde {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

} // namespace

double NoiseSpectrum::mu_at(int j) const {
    if (j == 0) return 0.0;
    require(j >= 1, "NoiseSpectrum: mode index must be >= 0");
    require(static_cast<bool>(mu), "NoiseSpectrum: mu rule not set");
    const double m = mu(j);
    require(std::isfinite(m) && m >= 0.0, "NoiseSpectrum: mu_j must be finite and >= 0");
    return m;
}

BrownianLattice::BrownianLattice(int steps, int modes, double h, SeedInfo seed_info,
                                 std::vector<double> increments)
    : steps_(steps), modes_(modes), h_(h), seed_info_(seed_info),
      increments_(std::move(increments)) {
    require(steps >= 1 && modes >= 1, "BrownianLattice: steps and modes must be >= 1");
    require(std::isfinite(h) && h > 0.0, "BrownianLattice: h must be positive");
    require(increments_.size() == static_cast<std::size_t>(steps) * modes,
            "BrownianLattice: increment table has wrong size");
}

BrownianLattice sample_lattice(int steps, int modes, double h,
                               std::uint64_t base_seed, std::uint64_t path_id) {
    require(steps >= 1 && modes >= 1, "sample_lattice: steps and modes must be >= 1");
    require(std::isfinite(h) && h > 0.0, "sample_lattice: h must be positive");
    std::vector<double> inc(static_cast<std::size_t>(steps) * modes);
    const double sqrt_h = std::sqrt(h);
    for (int m = 0; m < steps; ++m)
        for (int c = 0; c < modes; ++c)
            inc[static_cast<std::size_t>(m) * modes + c] =
                sqrt_h * keyed_gaussian(base_seed, path_id,
                                        static_cast<std::uint32_t>(m),
                                        static_cast<std::uint32_t>(c + 1));
    return BrownianLattice(steps, modes, h, SeedInfo{base_seed, path_id}, std::move(inc));
}

BrownianLattice coarsen_time(const BrownianLattice& lat, int factor) {
    require(factor >= 1, "coarsen_time: factor must be >= 1");
    require(lat.steps() % factor == 0, "coarsen_time: factor does not divide steps");
    if (factor == 1) return lat;
    const int coarse_steps = lat.steps() / factor;
    const int modes = lat.modes();
    std::vector<double> inc(static_cast<std::size_t>(coarse_steps) * modes, 0.0);
    for (int m = 0; m < coarse_steps; ++m)
        for (int f = 0; f < factor; ++f) {
            const std::span<const double> row = lat.row(m * factor + f);
            for (int c = 0; c < modes; ++c)
                inc[static_cast<std::size_t>(m) * modes + c] += row[c];
        }
    return BrownianLattice(coarse_steps, modes, lat.h() * factor, lat.seed_info(),
                           std::move(inc));
}

BrownianLattice truncate_modes(const BrownianLattice& lat, int new_modes) {
    require(new_modes >= 1, "truncate_modes: new_modes must be >= 1");
    require(new_modes <= lat.modes(), "truncate_modes: new_modes exceeds lattice modes");
    if (new_modes == lat.modes()) return lat;
    std::vector<double> inc(static_cast<std::size_t>(lat.steps()) * new_modes);
    for (int m = 0; m < lat.steps(); ++m) {
        const std::span<const double> row = lat.row(m);
        for (int c = 0; c < new_modes; ++c)
            inc[static_cast<std::size_t>(m) * new_modes + c] = row[c];
    }
    return BrownianLattice(lat.steps(), new_modes, lat.h(), lat.seed_info(), std::move(inc));
}

PhysicalField increment_field(const NoiseSpectrum& spec, std::span<const double> row,
                              const SineBasis& basis) {
    const int n = basis.n_modes();
    const int modes = static_cast<int>(row.size());
    const int n1 = n + 1;
    if (spec.family == EigenFamily::SineEigen && modes <= n) {
        // dW = dst of the per-mode draws scaled by sqrt(2 mu_j)
        std::vector<double> u(static_cast<std::size_t>(n), 0.0);
        const double sqrt2 = std::sqrt(2.0);
        for (int c = 0; c < modes; ++c)
            u[c] = sqrt2 * std::sqrt(spec.mu_at(c + 1)) * row[c];
        return PhysicalField(dst(basis, u));
    }
    // direct summation over modes at every grid point
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    const double sqrt2 = std::sqrt(2.0);
    for (int c = 0; c < modes; ++c) {
        const int j = c + 1;
        const double w = sqrt2 * std::sqrt(spec.mu_at(j)) * row[c];
        if (w == 0.0) continue;
        for (int k = 1; k <= n; ++k) {
            const double eta = (spec.family == EigenFamily::SineEigen)
                                   ? reduced_sine(static_cast<long long>(j) * k, n1)
                                   : reduced_cosine(static_cast<long long>(j) * k, n1);
            v[k - 1] += w * eta;
        }
    }
    return PhysicalField(std::move(v));
}

PhysicalField increment_field(const NoiseSpectrum& spec, const BrownianLattice& lat,
                              int m, const SineBasis& basis) {
    require(m >= 0 && m < lat.steps(), "increment_field: step index out of range");
    return increment_field(spec, lat.row(m), basis);
}

PhysicalField compensator_field(const NoiseSpectrum& spec, int modes, double h,
                                const SineBasis& basis) {
    require(modes >= 1, "compensator_field: modes must be >= 1");
    require(std::isfinite(h) && h > 0.0, "compensator_field: h must be positive");
    const int n = basis.n_modes();
    const int n1 = n + 1;
    std::vector<double> comp(static_cast<std::size_t>(n), 0.0);
    for (int j = 1; j <= modes; ++j) {
        const double mu = spec.mu_at(j);
        if (mu == 0.0) continue;
        for (int k = 1; k <= n; ++k) {
            const double eta = (spec.family == EigenFamily::SineEigen)
                                   ? reduced_sine(static_cast<long long>(j) * k, n1)
                                   : reduced_cosine(static_cast<long long>(j) * k, n1);
            comp[k - 1] += h * mu * 2.0 * eta * eta;
        }
    }
    return PhysicalField(std::move(comp));
}

} // namespace spde
