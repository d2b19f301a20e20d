#include "spde/schemes.hpp"

#include "spde/rng.hpp"

#include <cmath>
#include <string>

namespace spde {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void validate_config(const ProblemSpec& spec, const RunConfig& cfg, const SineBasis& basis) {
    require(cfg.n_modes >= 1 && cfg.steps >= 0 && cfg.noise_modes >= 1,
            "RunConfig: n_modes, noise_modes must be >= 1 and steps >= 0");
    require(cfg.n_modes == basis.n_modes(), "RunConfig: n_modes does not match basis");
    require(spec.diffusivity == basis.diffusivity(),
            "RunConfig: problem and basis diffusivity differ");
    if (cfg.scheme == SchemeKind::Milstein)
        require(spec.has_diffusion_dy(), "Milstein scheme requires diffusion_dy");
}

// zeta assembly plus propagation, with the per-mode multipliers hoisted by
// the caller.  Evaluation counts per call: RungeKutta 1 f + 2 g sweeps,
// Milstein 1 f + 1 g + 1 dg/dy, Euler 1 f + 1 g.
SpectralField step_impl(const ProblemSpec& spec, SchemeKind scheme, double h,
                        const SpectralField& state, const PhysicalField& dW,
                        const PhysicalField& compensator, const SineBasis& basis,
                        std::span<const double> multipliers) {
    const int n = basis.n_modes();
    PhysicalField y = to_physical(state, basis);
    std::vector<double> zeta(static_cast<std::size_t>(n));
    const double sqrt_h = std::sqrt(h);
    for (int k = 0; k < n; ++k) {
        const double x = basis.grid()[k];
        const double yk = y.values[k];
        const double fy = spec.drift(x, yk);
        const double gy = spec.diffusion(x, yk);
        double z = yk + h * fy + gy * dW.values[k];
        if (scheme != SchemeKind::Euler) {
            const double bracket = dW.values[k] * dW.values[k] - compensator.values[k];
            double factor;
            if (scheme == SchemeKind::RungeKutta)
                factor = (spec.diffusion(x, yk + sqrt_h * gy) - gy) / sqrt_h;
            else
                factor = spec.diffusion_dy(x, yk) * gy;
            z += 0.5 * factor * bracket;
        }
        zeta[k] = z;
    }
    SpectralField next = to_coefficients(PhysicalField(std::move(zeta)), basis);
    for (int j = 0; j < n; ++j) next.coeffs[j] *= multipliers[j];
    return next;
}

bool all_finite(const SpectralField& c) {
    for (double x : c.coeffs)
        if (!std::isfinite(x)) return false;
    return true;
}

SpectralField project_initial(const ProblemSpec& spec, const SineBasis& basis) {
    const int n = basis.n_modes();
    std::vector<double> xi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        xi[k] = spec.initial(basis.grid()[k]);
        require(std::isfinite(xi[k]), "integrate: initial data not finite on the grid");
    }
    return to_coefficients(PhysicalField(std::move(xi)), basis);
}

// Shared trajectory loop; row_of(m) yields the cfg.noise_modes increment
// columns for step m.
template <typename RowFn>
SpectralField integrate_rows(const ProblemSpec& spec, const RunConfig& cfg,
                             const SineBasis& basis, std::uint64_t path_id, RowFn&& row_of) {
    const double h = cfg.step_size(spec);
    SpectralField state = project_initial(spec, basis);
    if (cfg.steps == 0) return state;

    const std::vector<double> multipliers = (cfg.scheme == SchemeKind::Euler)
                                                ? resolvent_multipliers(basis, h)
                                                : semigroup_multipliers(basis, h);
    const PhysicalField compensator =
        (cfg.scheme == SchemeKind::Euler)
            ? PhysicalField(static_cast<std::size_t>(basis.n_modes()))
            : compensator_field(spec.noise, cfg.noise_modes, h, basis);

    for (int m = 0; m < cfg.steps; ++m) {
        const PhysicalField dW = increment_field(spec.noise, row_of(m), basis);
        state = step_impl(spec, cfg.scheme, h, state, dW, compensator, basis, multipliers);
        if (!all_finite(state)) throw IntegrationOverflow(m, path_id);
    }
    return state;
}

} // namespace

SchemeKind scheme_from_name(std::string_view name) {
    if (name == "euler") return SchemeKind::Euler;
    if (name == "milstein") return SchemeKind::Milstein;
    if (name == "runge-kutta") return SchemeKind::RungeKutta;
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(SchemeKind scheme) {
    switch (scheme) {
        case SchemeKind::Euler: return "euler";
        case SchemeKind::Milstein: return "milstein";
        case SchemeKind::RungeKutta: return "runge-kutta";
    }
    return "?";
}

IntegrationOverflow::IntegrationOverflow(int step_index, std::uint64_t path_id)
    : std::runtime_error("trajectory left the finite range at step " +
                         std::to_string(step_index) + " (path " + std::to_string(path_id) +
                         ")"),
      step_index_(step_index), path_id_(path_id) {}

GGFactor gg_factor(const ProblemSpec& spec, const PhysicalField& v, double h,
                   const SineBasis& basis) {
    require(std::isfinite(h) && h > 0.0, "gg_factor: h must be positive");
    require(static_cast<int>(v.size()) == basis.n_modes(),
            "gg_factor: field length does not match basis");
    const double sqrt_h = std::sqrt(h);
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = basis.grid()[k];
        const double gy = spec.diffusion(x, v.values[k]);
        out[k] = (spec.diffusion(x, v.values[k] + sqrt_h * gy) - gy) / sqrt_h;
        if (!std::isfinite(out[k]))
            throw std::domain_error("gg_factor: diffusion returned a non-finite value");
    }
    return GGFactor{PhysicalField(std::move(out))};
}

PhysicalField milstein_factor(const ProblemSpec& spec, const PhysicalField& v,
                              const SineBasis& basis) {
    require(spec.has_diffusion_dy(), "milstein_factor: diffusion_dy not supplied");
    require(static_cast<int>(v.size()) == basis.n_modes(),
            "milstein_factor: field length does not match basis");
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = basis.grid()[k];
        out[k] = spec.diffusion_dy(x, v.values[k]) * spec.diffusion(x, v.values[k]);
    }
    return PhysicalField(std::move(out));
}

SpectralField step(const ProblemSpec& spec, const RunConfig& cfg, const SpectralField& state,
                   const PhysicalField& dW, const PhysicalField& compensator,
                   const SineBasis& basis) {
    validate_config(spec, cfg, basis);
    require(cfg.steps >= 1, "step: cfg.steps must be >= 1");
    require(state.size() == static_cast<std::size_t>(basis.n_modes()) &&
                dW.size() == state.size() && compensator.size() == state.size(),
            "step: field lengths do not match basis");
    const double h = cfg.step_size(spec);
    const std::vector<double> multipliers = (cfg.scheme == SchemeKind::Euler)
                                                ? resolvent_multipliers(basis, h)
                                                : semigroup_multipliers(basis, h);
    SpectralField next = step_impl(spec, cfg.scheme, h, state, dW, compensator, basis,
                                   multipliers);
    if (!all_finite(next)) throw IntegrationOverflow(0, 0);
    return next;
}

SpectralField integrate(const ProblemSpec& spec, const RunConfig& cfg,
                        const BrownianLattice& lattice, const SineBasis& basis) {
    validate_config(spec, cfg, basis);
    require(lattice.steps() == cfg.steps || cfg.steps == 0,
            "integrate: lattice steps do not match config");
    require(lattice.modes() >= cfg.noise_modes,
            "integrate: lattice has fewer modes than the config needs");
    const double h = cfg.step_size(spec);
    require(cfg.steps == 0 || std::abs(lattice.h() - h) <= 1e-12 * h,
            "integrate: lattice step size does not match config");
    const std::size_t k = static_cast<std::size_t>(cfg.noise_modes);
    return integrate_rows(spec, cfg, basis, lattice.seed_info().path_id,
                          [&](int m) { return lattice.row(m).first(k); });
}

SpectralField integrate_path(const ProblemSpec& spec, const RunConfig& cfg,
                             const SineBasis& basis, std::uint64_t base_seed,
                             std::uint64_t path_id) {
    validate_config(spec, cfg, basis);
    const double sqrt_h = std::sqrt(cfg.step_size(spec));
    std::vector<double> row(static_cast<std::size_t>(cfg.noise_modes));
    return integrate_rows(spec, cfg, basis, path_id,
                          [&](int m) -> std::span<const double> {
                              for (int c = 0; c < cfg.noise_modes; ++c)
                                  row[c] = sqrt_h *
                                           keyed_gaussian(base_seed, path_id,
                                                          static_cast<std::uint32_t>(m),
                                                          static_cast<std::uint32_t>(c + 1));
                              return row;
                          });
}

} // namespace spde
