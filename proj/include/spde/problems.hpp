// Problem registry for the parabolic equation
//
//   dX_t(x) = [ k X_t''(x) + f(x, X_t(x)) ] dt + g(x, X_t(x)) dW_t(x)
//
// on (0,1) with zero Dirichlet boundary, X_0 = xi.  A ProblemSpec bundles the
// coefficient closures, the noise spectrum and the regularity exponents used
// for predicted-rate annotation.  Two nontrivial experiment setups plus two
// analytically transparent toys are built in.

#pragma once

#include "spde/noise.hpp"
#include "spde/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace spde {

using Coefficient = std::function<double(double, double)>; // (x, y) -> value

// Exponents of the error bound; each open-interval exponent is stored at its
// supremum and reported as "value minus arbitrarily small r".  vartheta is
// echoed in reports only and never used in computation.
struct Regularity {
    double beta = 0.0;
    double delta_sup = 0.0;
    double alpha_sup = 0.0;
    double gamma_sup = 0.0;
    std::optional<double> vartheta;
};

struct ProblemSpec {
    std::string name;
    double diffusivity = 1.0;
    double horizon = 1.0;
    Coefficient drift;                      // f(x, y)
    Coefficient diffusion;                  // g(x, y)
    Coefficient diffusion_dy;               // dg/dy(x, y); empty if not supplied
    std::function<double(double)> initial;  // xi(x)
    NoiseSpectrum noise;
    std::optional<Regularity> regularity;

    bool has_diffusion_dy() const { return static_cast<bool>(diffusion_dy); }
};

enum class BuiltinProblem { HeatSine, HeatCosine, LinearG, ZeroNoise };

ProblemSpec builtin(BuiltinProblem which);
// Name lookup: "heat-sine" | "heat-cosine" | "linear-g" | "zero-noise".
ProblemSpec builtin(std::string_view name);
const std::vector<std::string>& builtin_names();

// w(x_k) = fun(x_k, v(x_k)); rejects non-finite outputs since those always
// indicate a broken coefficient closure.
PhysicalField apply_pointwise(const Coefficient& fun, const PhysicalField& v,
                              const SineBasis& basis);

// The three error-bound exponents: spatial decay 2*gamma per N-doubling,
// noise-truncation exponent alpha on sup mu, temporal exponent
// min(2(gamma - beta), gamma) on M.
struct PredictedRates {
    double spatial = 0.0;
    double noise = 0.0;
    double temporal = 0.0;
};

PredictedRates predicted_rates(const ProblemSpec& spec);

} // namespace spde
