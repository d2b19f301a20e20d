// Sine eigenbasis of the 1-D Dirichlet Laplacian on (0,1).
//
// The operator A = k d²/dx² with homogeneous Dirichlet boundary has
// eigenpairs e_j(x) = sqrt(2) sin(j pi x), lambda_j = k pi² j².  States are
// kept either as coefficients against e_1..e_N (SpectralField) or as values
// on the interior grid x_k = k/(N+1) (PhysicalField), and converted
// explicitly through the discrete sine transform pair
//
//   dst(z)(j)  =            sum_k z(k) sin(j pi k / (N+1))
//   idst(z)(j) = 2/(N+1) *  sum_k z(k) sin(j pi k / (N+1)),
//
// which are exact inverses of each other.  idst doubles as the composite
// trapezoidal rule for <v, e_j>_H on the grid, so to_coefficients is the
// grid quadrature of the continuous inner product.
//
// Everything here is a pure function of immutable values; safe to call from
// any number of threads.

#pragma once

#include <memory>
#include <span>
#include <vector>

namespace spde {

// Coefficients c_j against the orthonormal eigenbasis e_j, j = 1..N.
struct SpectralField {
    std::vector<double> coeffs;

    SpectralField() = default;
    explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}
    explicit SpectralField(std::size_t n) : coeffs(n, 0.0) {}
    std::size_t size() const { return coeffs.size(); }
};

// Values v(x_k) at the interior grid points; the zero boundary values are
// implicit and never stored.
struct PhysicalField {
    std::vector<double> values;

    PhysicalField() = default;
    explicit PhysicalField(std::vector<double> v) : values(std::move(v)) {}
    explicit PhysicalField(std::size_t n) : values(n, 0.0) {}
    std::size_t size() const { return values.size(); }
};

// N retained modes of A = k Laplacian, with the grid, the eigenvalues and a
// precomputed table of sin(j pi k/(N+1)) shared by the transforms.  Copies
// are cheap (the table is shared) and instances are immutable.
class SineBasis {
public:
    SineBasis(int n_modes, double diffusivity);

    int n_modes() const { return n_modes_; }
    double diffusivity() const { return diffusivity_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }

    // Row-major N x N table, entry (j-1, k-1) = sin(j pi k / (N+1)).
    const double* sine_table() const { return table_->data(); }

private:
    int n_modes_;
    double diffusivity_;
    std::vector<double> grid_;
    std::vector<double> eigenvalues_;
    std::shared_ptr<const std::vector<double>> table_;
};

// sin(pi * t / denom) with the integer phase t reduced modulo the period, so
// entries stay accurate for large j*k and exact zeros come out exact.
double reduced_sine(long long t, int denom);
double reduced_cosine(long long t, int denom);

// Direct transforms; O(N^2) with on-the-fly sines.  The basis overloads use
// the precomputed table and are the ones used in solver loops.
std::vector<double> dst(std::span<const double> z);
std::vector<double> idst(std::span<const double> z);
std::vector<double> dst(const SineBasis& basis, std::span<const double> z);
std::vector<double> idst(const SineBasis& basis, std::span<const double> z);

// v(x_k) = sqrt(2) * dst(c)(k)
PhysicalField to_physical(const SpectralField& c, const SineBasis& basis);
// c_j = idst(v)(j) / sqrt(2)  (trapezoidal <v, e_j>_H)
SpectralField to_coefficients(const PhysicalField& v, const SineBasis& basis);

// (exp(-lambda_j h))_j and (1/(1 + lambda_j h))_j for a step of size h > 0.
std::vector<double> semigroup_multipliers(const SineBasis& basis, double h);
std::vector<double> resolvent_multipliers(const SineBasis& basis, double h);

// l2 norm of the coefficients; equals the H-norm for fields in span{e_j}.
double h_norm(const SpectralField& c);

// Zero-pad or truncate coefficients between bases with the same diffusivity
// (truncation is the spectral projection onto the smaller span).
SpectralField resample(const SpectralField& c, const SineBasis& from, const SineBasis& to);

} // namespace spde
