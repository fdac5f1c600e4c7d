#pragma once

#include <cstdint>

#include "sburg/spde.hpp"

namespace sburg {

// Joint state of a trajectory and its directional derivative J = grad_h u.
// J satisfies the linearization of the dynamics; the additive noise drops
// out, so J evolves by J <- exp(-hA)(J + h DF(u) J) with u the base state.
struct VariationalState {
    SpectralField u;
    SpectralField j;
    double t = 0.0;
};

class VariationalStepper {
  public:
    VariationalStepper(const Dynamics& dyn, int n_max, double h);

    // Advances (u, J) one step; DF is evaluated at the pre-step u.
    void step(VariationalState& st, double ds, std::span<const double> xi);

    double h() const { return h_; }

  private:
    SpectralField drift_derivative(const SpectralField& u, const SpectralField& j);

    Dynamics dyn_;
    int n_max_;
    double h_;
    std::vector<double> damp_;
    BilinearEvaluator eval_;
};

struct GradientEstimate {
    double estimate = 0.0;      // median-of-means
    double stderr_ = 0.0;
    double plain_mean = 0.0;    // alongside, for comparison
    double plain_stderr = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_censored = 0;
    bool heavy_tail_warning = false;
};

// Monte Carlo estimate of grad_h E Phi(u_t(phi)) by the derivative-formula
// weight  Phi(u_t) (1/S_t) int_0^t <Q^{-1} J_s, dL_s>_0, with the stochastic
// integral accumulated left-point as sum_j <Q^{-1} J_{t_j}, dL_j>_0.
// Requires beta_k != 0 for all retained modes.
GradientEstimate bismut_gradient(const SpectralField& phi, const SpectralField& h_dir,
                                 const Observable& obs, double t, std::size_t n_samples,
                                 const Dynamics& dyn, double h, std::uint64_t seed,
                                 std::size_t n_blocks = 40);

// Central finite difference of the semigroup with common random numbers:
// per path, (Phi(u_t(phi + eps h)) - Phi(u_t(phi - eps h))) / (2 eps) with a
// shared noise realization.
GradientEstimate finite_difference_gradient(const SpectralField& phi, const SpectralField& h_dir,
                                            const Observable& obs, double t, double eps,
                                            std::size_t n_samples, const Dynamics& dyn, double h,
                                            std::uint64_t seed);

// Runs the variational flow along one path driven by `path` and returns J at
// the final grid point (used by finite-difference cross-checks).
SpectralField variational_flow_on_path(const SpectralField& phi, const SpectralField& h_dir,
                                       const Dynamics& dyn, const NoisePath& path);

struct GrowthBoundReport {
    double empirical_constant = 0.0; // max over paths of sup_t t^{(theta-sigma)/2} ||J_t||_theta / ||h||_sigma
    double median_constant = 0.0;    // median over paths of the same per-path sup
    std::size_t n_paths = 0;
};

// Empirical constant in the weighted gradient bound over an ensemble.
GrowthBoundReport variational_growth_bound(const SpectralField& phi, const SpectralField& h_dir,
                                           double sigma, double theta, double t_end,
                                           std::size_t n_paths, const Dynamics& dyn, double h,
                                           std::uint64_t seed);

} // namespace sburg
