// Time-stepping schemes in the transform formulation.
//
// One step assembles the predictor field in physical space,
//
//   zeta_m = y + h f(., y) + g(., y) dW_m [+ 1/2 factor (dW_m^2 - comp)],
//
// transforms it to coefficients and applies the per-mode propagator:
//
//   Euler       resolvent 1/(1 + lambda_j h), no bracket term
//   Milstein    semigroup exp(-lambda_j h), factor = dg/dy(., y) g(., y)
//   RungeKutta  semigroup, derivative-free factor
//               (g(., y + sqrt(h) g(., y)) - g(., y)) / sqrt(h)
//
// comp is the compensator h sum mu_j eta_j^2.  Per step this costs one sweep
// of f and two of g for RungeKutta, and one sweep each of f, g and dg/dy for
// Milstein.  Stepping within a trajectory is sequential; distinct
// trajectories share only immutable inputs and may run in parallel.

#pragma once

#include "spde/noise.hpp"
#include "spde/problems.hpp"
#include "spde/spectral.hpp"

#include <stdexcept>
#include <string_view>

namespace spde {

enum class SchemeKind { Euler, Milstein, RungeKutta };

SchemeKind scheme_from_name(std::string_view name); // "euler" | "milstein" | "runge-kutta"
std::string_view scheme_name(SchemeKind scheme);

struct RunConfig {
    int n_modes = 0;
    int steps = 0;
    int noise_modes = 0;
    SchemeKind scheme = SchemeKind::RungeKutta;

    double step_size(const ProblemSpec& spec) const {
        return spec.horizon / static_cast<double>(steps);
    }
};

// The derivative-free difference quotient evaluated along a state.
struct GGFactor {
    PhysicalField values; // (g(x, v + sqrt(h) g(x,v)) - g(x, v)) / sqrt(h)
};

GGFactor gg_factor(const ProblemSpec& spec, const PhysicalField& v, double h,
                   const SineBasis& basis);

// dg/dy(x, v) * g(x, v) pointwise; requires diffusion_dy.
PhysicalField milstein_factor(const ProblemSpec& spec, const PhysicalField& v,
                              const SineBasis& basis);

// A trajectory left the finite range; step_index says where.
class IntegrationOverflow : public std::runtime_error {
public:
    IntegrationOverflow(int step_index, std::uint64_t path_id);
    int step_index() const { return step_index_; }
    std::uint64_t path_id() const { return path_id_; }

private:
    int step_index_;
    std::uint64_t path_id_;
};

// One step of the configured scheme from a coefficient state; dW and the
// compensator are grid fields for this step.
SpectralField step(const ProblemSpec& spec, const RunConfig& cfg, const SpectralField& state,
                   const PhysicalField& dW, const PhysicalField& compensator,
                   const SineBasis& basis);

// Full trajectory from Y_0 = P_N xi using the first cfg.noise_modes columns
// of the lattice; returns the terminal coefficient field.
SpectralField integrate(const ProblemSpec& spec, const RunConfig& cfg,
                        const BrownianLattice& lattice, const SineBasis& basis);

// Same trajectory with increments synthesized on the fly from the keyed
// stream instead of a stored lattice; bit-identical to integrate() on
// sample_lattice(cfg.steps, cfg.noise_modes, ...), without the M x K table.
SpectralField integrate_path(const ProblemSpec& spec, const RunConfig& cfg,
                             const SineBasis& basis, std::uint64_t base_seed,
                             std::uint64_t path_id);

} // namespace spde
