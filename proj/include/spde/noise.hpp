// Q-Wiener process simulation.
//
// The driving noise is W_t = sum_j sqrt(mu_j) beta_t^j eta_j with independent
// scalar Brownian motions beta^j and a trace-class spectrum mu_j >= 0.  A
// BrownianLattice tabulates the increments dbeta_m^j = beta_{t_{m+1}}^j -
// beta_{t_m}^j of one sampled path; coarse-in-time and truncated-in-mode
// views of the same path are derived from it, which is what couples every
// resolution of a strong-error experiment to one underlying noise sample.

#pragma once

#include "spde/spectral.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace spde {

enum class EigenFamily {
    SineEigen,   // eta_j(x) = sqrt(2) sin(j pi x), j >= 1
    CosineEigen, // eta_0 = 1 with mu_0 = 0, eta_j(x) = sqrt(2) cos(j pi x)
};

// Spectrum of the covariance operator Q.  mu is queried for modes j >= 1;
// the CosineEigen constant mode eta_0 carries weight zero and never enters
// any sum.
struct NoiseSpectrum {
    EigenFamily family = EigenFamily::SineEigen;
    std::function<double(int)> mu;

    double mu_at(int j) const;
};

struct SeedInfo {
    std::uint64_t base_seed = 0;
    std::uint64_t path_id = 0;
    bool operator==(const SeedInfo&) const = default;
};

// M x K table of per-step, per-mode Brownian increments: entry (m, c) is
// dbeta_m^{c+1}, an N(0, h) draw.  Immutable after construction.
class BrownianLattice {
public:
    BrownianLattice(int steps, int modes, double h, SeedInfo seed_info,
                    std::vector<double> increments);

    int steps() const { return steps_; }
    int modes() const { return modes_; }
    double h() const { return h_; }
    const SeedInfo& seed_info() const { return seed_info_; }

    // 0-based step m and mode column c (eigenmode j = c + 1)
    double increment(int m, int c) const {
        return increments_[static_cast<std::size_t>(m) * modes_ + c];
    }
    std::span<const double> row(int m) const {
        return {increments_.data() + static_cast<std::size_t>(m) * modes_,
                static_cast<std::size_t>(modes_)};
    }

private:
    int steps_;
    int modes_;
    double h_;
    SeedInfo seed_info_;
    std::vector<double> increments_;
};

// Fresh M x K table of N(0, h) draws addressed by (base_seed, path_id, m, j);
// the same arguments always regenerate the identical table.
BrownianLattice sample_lattice(int steps, int modes, double h,
                               std::uint64_t base_seed, std::uint64_t path_id);

// Coarse step m becomes the sum of fine steps [factor*m, factor*(m+1)); the
// step size scales by factor.  factor must divide lat.steps().
BrownianLattice coarsen_time(const BrownianLattice& lat, int factor);

// Keep the first new_modes columns unchanged.
BrownianLattice truncate_modes(const BrownianLattice& lat, int new_modes);

// dW_m at the grid points: sum_{j<=K} sqrt(mu_j) dbeta_m^j eta_j(x_k).
// Synthesized with the basis sine transform when the spectrum lives on the
// sine family and K <= N, by direct summation otherwise.
PhysicalField increment_field(const NoiseSpectrum& spec, const BrownianLattice& lat,
                              int m, const SineBasis& basis);

// Same synthesis from one raw increment row (mode j = position + 1); the
// lattice overload forwards here.
PhysicalField increment_field(const NoiseSpectrum& spec, std::span<const double> row,
                              const SineBasis& basis);

// h * sum_{j<=K} mu_j eta_j(x_k)^2, the pointwise variance E[(dW_m(x_k))^2].
// Computed once per configuration and reused across steps.
PhysicalField compensator_field(const NoiseSpectrum& spec, int modes, double h,
                                const SineBasis& basis);

} // namespace spde
