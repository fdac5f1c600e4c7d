#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sburg/spectral.hpp"

namespace sburg {

// Smooth cutoff: chi(r) = 1 for |r| <= 1, 0 for |r| >= 2, and on (1,2) the
// bump interpolation g(2-r)/(g(2-r)+g(r-1)) with g(s) = exp(-1/s) for s > 0.
// C-infinity, nonincreasing on [1,2], chi(1.5) = 1/2 by symmetry.
double cutoff_chi(double r);
double cutoff_chi_derivative(double r);

// Evaluates the Galerkin-exact coefficients of u * v' truncated to n_max.
// The pointwise product is formed on a padded grid with at least
// 3*n_max + 1 points, so every retained coefficient is alias-free and
// <B(u,u), u>_0 vanishes exactly (up to roundoff).
class BilinearEvaluator {
  public:
    explicit BilinearEvaluator(int n_max);

    SpectralField product_with_derivative(const SpectralField& u, const SpectralField& v);

    // F'(u)[J] for F = B: B(J, u) + B(u, J).
    SpectralField derivative(const SpectralField& u, const SpectralField& J);

    int n_max() const { return n_max_; }

  private:
    void synthesize(const SpectralField& f, bool differentiate, std::vector<std::complex<double>>& grid);

    int n_max_;
    std::size_t m_; // padded grid size (power of two >= 3 n_max + 1)
    std::vector<std::complex<double>> ga_, gb_;
};

// One-shot helpers (cache an evaluator per n_max per thread).
SpectralField bilinear(const SpectralField& u, const SpectralField& v);
double trilinear_pairing(const SpectralField& u, const SpectralField& v, const SpectralField& w);

// B_R(u) = B(u,u) * chi(||u||_1 / (5R)).
SpectralField truncated_nonlinearity(const SpectralField& u, double r_ball);

// Derivative of u -> B_R(u) in direction J (chain rule through the cutoff).
SpectralField truncated_nonlinearity_derivative(const SpectralField& u, const SpectralField& J,
                                                double r_ball);

// Empirical supremum of <B(u,v), w>_0 / (||u||_s1 ||v||_{s2+1} ||w||_s3)
// over random triples with varied spectral decay profiles.
double fit_trilinear_constant(double s1, double s2, double s3, int n_max, int n_triples,
                              std::uint64_t seed);

} // namespace sburg
