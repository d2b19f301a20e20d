#include "spde/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spde {

namespace {

double heat_sine_g(double, double y) {
    const double s = std::sin(y);
    const double q = 1.0 + y * y;
    return (y + s * s * s) / (q * q);
}

double heat_sine_dg(double, double y) {
    const double s = std::sin(y);
    const double c = std::cos(y);
    const double q = 1.0 + y * y;
    return (3.0 * q * s * s * c - 4.0 * y * s * s * s - 3.0 * y * y + 1.0) / (q * q * q);
}

double heat_cosine_g(double, double y) {
    return y / (1.0 + y * y);
}

double heat_cosine_dg(double, double y) {
    const double q = 1.0 + y * y;
    return (1.0 - y * y) / (q * q);
}

ProblemSpec make_heat_sine() {
    ProblemSpec spec;
    spec.name = "heat-sine";
    spec.diffusivity = 1.0 / 200.0;
    spec.horizon = 1.0;
    spec.drift = [](double, double y) { return 1.0 - 2.0 * y; };
    spec.diffusion = heat_sine_g;
    spec.diffusion_dy = heat_sine_dg;
    spec.initial = [](double) { return 0.0; };
    spec.noise.family = EigenFamily::SineEigen;
    spec.noise.mu = [](int j) { return 1.0 / (static_cast<double>(j) * j); };
    spec.regularity = Regularity{0.2, 0.25, 0.75, 0.75, std::nullopt};
    return spec;
}

ProblemSpec make_heat_cosine() {
    ProblemSpec spec;
    spec.name = "heat-cosine";
    spec.diffusivity = 1.0 / 50.0;
    spec.horizon = 1.0;
    spec.drift = [](double, double y) { return 1.0 - y; };
    spec.diffusion = heat_cosine_g;
    spec.diffusion_dy = heat_cosine_dg;
    spec.initial = [](double) { return 0.0; };
    spec.noise.family = EigenFamily::CosineEigen;
    spec.noise.mu = [](int j) { return 1.0 / (static_cast<double>(j) * j * j); };
    spec.regularity = Regularity{0.2, 0.5, 2.0 / 3.0, 1.0, std::nullopt};
    return spec;
}

ProblemSpec make_linear_g() {
    ProblemSpec spec = make_heat_sine();
    spec.name = "linear-g";
    spec.diffusion = [](double, double y) { return y; };
    spec.diffusion_dy = [](double, double) { return 1.0; };
    return spec;
}

ProblemSpec make_zero_noise() {
    ProblemSpec spec = make_heat_sine();
    spec.name = "zero-noise";
    spec.diffusion = [](double, double) { return 0.0; };
    spec.diffusion_dy = [](double, double) { return 0.0; };
    return spec;
}

} // namespace

ProblemSpec builtin(BuiltinProblem which) {
    switch (which) {
        case BuiltinProblem::HeatSine: return make_heat_sine();
        case BuiltinProblem::HeatCosine: return make_heat_cosine();
        case BuiltinProblem::LinearG: return make_linear_g();
        case BuiltinProblem::ZeroNoise: return make_zero_noise();
    }
    throw std::invalid_argument("builtin: unknown problem");
}

ProblemSpec builtin(std::string_view name) {
    if (name == "heat-sine") return builtin(BuiltinProblem::HeatSine);
    if (name == "heat-cosine") return builtin(BuiltinProblem::HeatCosine);
    if (name == "linear-g") return builtin(BuiltinProblem::LinearG);
    if (name == "zero-noise") return builtin(BuiltinProblem::ZeroNoise);
    throw std::invalid_argument("builtin: unknown problem name '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"heat-sine", "heat-cosine", "linear-g",
                                                   "zero-noise"};
    return names;
}

PhysicalField apply_pointwise(const Coefficient& fun, const PhysicalField& v,
                              const SineBasis& basis) {
    if (static_cast<int>(v.size()) != basis.n_modes())
        throw std::invalid_argument("apply_pointwise: field length does not match basis");
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = fun(basis.grid()[k], v.values[k]);
        if (!std::isfinite(out[k]))
            throw std::domain_error("apply_pointwise: coefficient function returned a "
                                    "non-finite value");
    }
    return PhysicalField(std::move(out));
}

PredictedRates predicted_rates(const ProblemSpec& spec) {
    if (!spec.regularity)
        throw std::invalid_argument("predicted_rates: regularity exponents not populated");
    const Regularity& r = *spec.regularity;
    // exponents are stored at the suprema of their open intervals
    const bool admissible = r.delta_sup > 0.0 && r.delta_sup <= 0.5 && r.alpha_sup > 0.0 &&
                            r.beta <= r.delta_sup + 0.5 &&
                            r.gamma_sup >= std::max(r.delta_sup, r.beta) &&
                            r.gamma_sup <= r.delta_sup + 0.5;
    if (!admissible)
        throw std::invalid_argument("predicted_rates: regularity exponents out of range");
    PredictedRates rates;
    rates.spatial = 2.0 * r.gamma_sup;
    rates.noise = r.alpha_sup;
    rates.temporal = std::min(2.0 * (r.gamma_sup - r.beta), r.gamma_sup);
    return rates;
}

} // namespace spde
