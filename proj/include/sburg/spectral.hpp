#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sburg/rng.hpp"

namespace sburg {

// Mean-zero real trigonometric polynomial on the torus [0, 2*pi), stored as
// cos/sin coefficient pairs per wavenumber with respect to the orthonormal
// basis  c_k(x) = pi^{-1/2} cos(kx),  s_k(x) = pi^{-1/2} sin(kx),  k >= 1.
//
// Both basis elements of wavenumber k are eigenfunctions of A = -d^2/dx^2
// with eigenvalue k^2. The flat index used elsewhere in the literature
// (even index -> cos, odd -> sin) maps to this layout as
//   e_{2k} = cos slot of wavenumber k,  e_{2k+1} = sin slot of wavenumber k.
struct SpectralField {
    int n_max = 0;
    std::vector<double> c; // cos coefficients, c[k-1] for wavenumber k
    std::vector<double> s; // sin coefficients, s[k-1] for wavenumber k

    SpectralField() = default;
    explicit SpectralField(int n) : n_max(n), c(n, 0.0), s(n, 0.0) {}

    double& cos_coeff(int k) { return c[static_cast<std::size_t>(k - 1)]; }
    double& sin_coeff(int k) { return s[static_cast<std::size_t>(k - 1)]; }
    double cos_coeff(int k) const { return c[static_cast<std::size_t>(k - 1)]; }
    double sin_coeff(int k) const { return s[static_cast<std::size_t>(k - 1)]; }

    bool finite() const;

    // Builds a field from plain trig amplitudes: sum of amp*cos(kx) or
    // amp*sin(kx) terms. Convenient in tests: the stored orthonormal
    // coefficient for amplitude 1 is sqrt(pi).
    static SpectralField from_trig_cos(int n_max, int k, double amp);
    static SpectralField from_trig_sin(int n_max, int k, double amp);
};

SpectralField operator+(const SpectralField& u, const SpectralField& v);
SpectralField operator-(const SpectralField& u, const SpectralField& v);
SpectralField operator*(double a, const SpectralField& u);

// <u, v>_0 = sum of coefficient products.
double inner0(const SpectralField& u, const SpectralField& v);

// ||u||_gamma = ( sum_k k^{2 gamma} (c_k^2 + s_k^2) )^{1/2}.
double sobolev_norm(const SpectralField& u, double gamma);

// A^{gamma/2} u: scales wavenumber k by k^gamma.
SpectralField apply_fractional_power(const SpectralField& u, double gamma);

// e^{-tA} u: scales wavenumber k by exp(-k^2 t). Rejects t < 0.
SpectralField apply_semigroup(const SpectralField& u, double t);

// Zeroes every wavenumber above n. Idempotent.
SpectralField project(const SpectralField& u, int n);

// Evaluates the field at x (orthonormal-basis synthesis).
double evaluate(const SpectralField& u, double x);

// Diagonal noise intensity Q_beta: wavenumber k is scaled by beta[k-1]
// (the same multiplier on the cos and sin slot). Construction checks the
// two-sided power bounds  delta k^{-theta} <= |beta_k| <= delta^{-1} k^{-theta_prime}.
struct NoiseIntensity {
    double theta = 0.0;
    double theta_prime = 0.0;
    double delta = 1.0;
    std::vector<double> beta;

    NoiseIntensity() = default;
    NoiseIntensity(double theta_, double theta_prime_, double delta_, std::vector<double> beta_);

    int n_max() const { return static_cast<int>(beta.size()); }

    // beta_k = k^{-theta} with theta = theta_prime; satisfies the bounds with
    // the given delta as long as delta <= 1.
    static NoiseIntensity power_law(double theta, double theta_prime, double delta, int n_max);

    // K_gamma = sum over the flat basis of lambda^gamma beta^2
    //         = 2 sum_k k^{2 gamma} beta_k^2.
    double k_gamma(double gamma) const;
};

SpectralField q_apply(const NoiseIntensity& q, const SpectralField& u);
// Rejects any beta_k == 0 with SingularIntensityError.
SpectralField q_inverse(const NoiseIntensity& q, const SpectralField& u);

// CSV row: n_max, c_1..c_N, s_1..s_N with 17 significant digits.
std::string field_to_csv_row(const SpectralField& u);
SpectralField field_from_csv_row(const std::string& row);

// Gaussian random field with coefficient scale k^{-decay}, normalized so
// that ||u||_gamma == target_norm (gamma = 0 by default).
SpectralField random_field(int n_max, double decay, double target_norm, RngStream& rng,
                           double norm_gamma = 0.0);

} // namespace sburg
