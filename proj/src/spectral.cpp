#include "spde/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spde {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

void require_finite(std::span<const double> z, const char* what) {
    for (double x : z)
        if (!std::isfinite(x)) throw std::invalid_argument(what);
}

} // namespace

double reduced_sine(long long t, int denom) {
    const long long period = 2LL * denom;
    long long r = t % period;
    if (r < 0) r += period;
    double sign = 1.0;
    if (r >= denom) { // sin(pi + x) = -sin(x)
        r -= denom;
        sign = -1.0;
    }
    if (2 * r > denom) r = denom - r; // sin(pi - x) = sin(x)
    return sign * std::sin(kPi * static_cast<double>(r) / static_cast<double>(denom));
}

double reduced_cosine(long long t, int denom) {
    const long long period = 2LL * denom;
    long long r = t % period;
    if (r < 0) r += period;
    if (r > denom) r = period - r; // cos(2 pi - x) = cos(x)
    double sign = 1.0;
    if (2 * r > denom) { // cos(pi - x) = -cos(x)
        r = denom - r;
        sign = -1.0;
    }
    return sign * std::cos(kPi * static_cast<double>(r) / static_cast<double>(denom));
}

SineBasis::SineBasis(int n_modes, double diffusivity)
    : n_modes_(n_modes), diffusivity_(diffusivity) {
    require(n_modes >= 1, "SineBasis: n_modes must be >= 1");
    require(std::isfinite(diffusivity) && diffusivity > 0.0,
            "SineBasis: diffusivity must be positive");
    const int n1 = n_modes + 1;
    grid_.resize(n_modes);
    eigenvalues_.resize(n_modes);
    for (int j = 1; j <= n_modes; ++j) {
        grid_[j - 1] = static_cast<double>(j) / static_cast<double>(n1);
        eigenvalues_[j - 1] = diffusivity * kPi * kPi * static_cast<double>(j) * static_cast<double>(j);
    }
    auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n_modes) * n_modes);
    for (int j = 1; j <= n_modes; ++j)
        for (int k = 1; k <= n_modes; ++k)
            (*table)[static_cast<std::size_t>(j - 1) * n_modes + (k - 1)] =
                reduced_sine(static_cast<long long>(j) * k, n1);
    table_ = std::move(table);
}

std::vector<double> dst(std::span<const double> z) {
    const int n = static_cast<int>(z.size());
    require(n >= 1, "dst: empty input");
    require_finite(z, "dst: non-finite input");
    const int n1 = n + 1;
    std::vector<double> out(n);
    for (int j = 1; j <= n; ++j) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k)
            acc += z[k - 1] * reduced_sine(static_cast<long long>(j) * k, n1);
        out[j - 1] = acc;
    }
    return out;
}

std::vector<double> idst(std::span<const double> z) {
    const int n = static_cast<int>(z.size());
    require(n >= 1, "idst: empty input");
    std::vector<double> out = dst(z);
    const double scale = 2.0 / static_cast<double>(n + 1);
    for (double& y : out) y *= scale;
    return out;
}

std::vector<double> dst(const SineBasis& basis, std::span<const double> z) {
    const int n = basis.n_modes();
    require(static_cast<int>(z.size()) == n, "dst: length does not match basis");
    const double* table = basis.sine_table();
    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        const double* row = table + static_cast<std::size_t>(j) * n;
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += z[k] * row[k];
        out[j] = acc;
    }
    return out;
}

std::vector<double> idst(const SineBasis& basis, std::span<const double> z) {
    std::vector<double> out = dst(basis, z);
    const double scale = 2.0 / static_cast<double>(basis.n_modes() + 1);
    for (double& y : out) y *= scale;
    return out;
}

PhysicalField to_physical(const SpectralField& c, const SineBasis& basis) {
    require(static_cast<int>(c.size()) == basis.n_modes(),
            "to_physical: coefficient length does not match basis");
    std::vector<double> v = dst(basis, c.coeffs);
    const double sqrt2 = std::sqrt(2.0);
    for (double& x : v) x *= sqrt2;
    return PhysicalField(std::move(v));
}

SpectralField to_coefficients(const PhysicalField& v, const SineBasis& basis) {
    require(static_cast<int>(v.size()) == basis.n_modes(),
            "to_coefficients: value length does not match basis");
    std::vector<double> c = idst(basis, v.values);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double& x : c) x *= inv_sqrt2;
    return SpectralField(std::move(c));
}

std::vector<double> semigroup_multipliers(const SineBasis& basis, double h) {
    require(std::isfinite(h) && h > 0.0, "semigroup_multipliers: h must be positive");
    std::vector<double> m(basis.n_modes());
    for (int j = 0; j < basis.n_modes(); ++j)
        m[j] = std::exp(-basis.eigenvalues()[j] * h);
    return m;
}

std::vector<double> resolvent_multipliers(const SineBasis& basis, double h) {
    require(std::isfinite(h) && h > 0.0, "resolvent_multipliers: h must be positive");
    std::vector<double> m(basis.n_modes());
    for (int j = 0; j < basis.n_modes(); ++j)
        m[j] = 1.0 / (1.0 + basis.eigenvalues()[j] * h);
    return m;
}

double h_norm(const SpectralField& c) {
    double acc = 0.0;
    for (double x : c.coeffs) acc += x * x;
    return std::sqrt(acc);
}

SpectralField resample(const SpectralField& c, const SineBasis& from, const SineBasis& to) {
    require(static_cast<int>(c.size()) == from.n_modes(),
            "resample: coefficient length does not match source basis");
    require(from.diffusivity() == to.diffusivity(),
            "resample: bases have different diffusivity");
    std::vector<double> out(static_cast<std::size_t>(to.n_modes()), 0.0);
    const int keep = std::min(from.n_modes(), to.n_modes());
    for (int j = 0; j < keep; ++j) out[j] = c.coeffs[j];
    return SpectralField(std::move(out));
}

} // namespace spde
