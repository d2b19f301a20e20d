// Independent brute-force oracles used by the test suites.  These stay
// deliberately naive -- plain std::sin sums and textbook formulas -- so they
// share no code with the transforms and synthesis paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

inline std::vector<double> direct_dst(std::span<const double> z) {
    const int n = static_cast<int>(z.size());
    std::vector<double> y(n, 0.0);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
            y[j - 1] += z[k - 1] * std::sin(j * kPi * k / (n + 1.0));
    return y;
}

inline std::vector<double> direct_idst(std::span<const double> z) {
    std::vector<double> y = direct_dst(z);
    for (double& v : y) v *= 2.0 / (z.size() + 1.0);
    return y;
}

// dW_m(x_k) = sum_j sqrt(mu_j) dbeta^j eta_j(x_k), direct O(N K) sum
inline std::vector<double> direct_increment(std::span<const double> row, bool sine_family,
                                            const std::vector<double>& mu, int n) {
    std::vector<double> v(n, 0.0);
    for (int k = 1; k <= n; ++k) {
        const double x = static_cast<double>(k) / (n + 1.0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const int j = static_cast<int>(c) + 1;
            const double eta = sine_family ? std::sqrt(2.0) * std::sin(j * kPi * x)
                                           : std::sqrt(2.0) * std::cos(j * kPi * x);
            v[k - 1] += std::sqrt(mu[c]) * row[c] * eta;
        }
    }
    return v;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Two-sided Kolmogorov-Smirnov statistic against N(0, variance).
inline double ks_statistic(std::vector<double> samples, double variance) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    const double sd = std::sqrt(variance);
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = normal_cdf(samples[i] / sd);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

// deterministic uniform in [-1, 1) for building test inputs
inline double test_uniform(std::uint64_t& state) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return 2.0 * (static_cast<double>(state >> 11) * 0x1.0p-53) - 1.0;
}

inline std::vector<double> random_vector(std::uint64_t seed, int n) {
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ULL + 1;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = oracles::test_uniform(s);
    return v;
}

} // namespace oracles
