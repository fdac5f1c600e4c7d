#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sburg/spectral.hpp"
#include "sburg/subordinator.hpp"

namespace sburg {

// One realization of the subordinated cylindrical noise on n wavenumbers:
// a time grid, per-step subordinator increments, and per-step standard
// normal draws (cos block then sin block). The implied noise increment of
// step j is  dL_j = sqrt(ds_j) * xi_j, placed at the step's right endpoint
// (cadlag convention: the jump arrives at t_{j+1}).
struct NoisePath {
    int n_modes = 0;
    std::vector<double> times; // size M+1, strictly increasing, times[0] == 0
    std::vector<double> ds;    // size M, nonnegative
    std::vector<std::vector<double>> gauss; // size M, each 2*n_modes

    std::size_t n_steps() const { return ds.size(); }

    // Cumulative subordinator value at times[i].
    double subordinator_at(std::size_t i) const;

    // Noise increment of step j as a field: sqrt(ds_j) xi_j.
    SpectralField increment(std::size_t j) const;

    // Running path L at grid point i (prefix sum of increments).
    SpectralField level_at(std::size_t i) const;
};

// Draws one path on the given grid. Deterministic given the sampler state.
NoisePath generate_path(StableSubordinatorSampler& sampler, int n_modes,
                        std::span<const double> grid);

// Test hook: freezes the subordinator at ds_j = dt_j, which reduces L to a
// cylindrical Brownian motion.
NoisePath generate_brownian_path(RngStream& rng, int n_modes, std::span<const double> grid);

// Aggregates consecutive steps of a fine path into a coarser path with
// `factor` fine steps per coarse step. Increments combine exactly:
// ds adds, and the Gaussian block becomes the normalized sum of the fine
// noise increments, so the coarse dL equals the summed fine dL bit for bit
// in law and pathwise.
NoisePath coarsen_path(const NoisePath& fine, std::size_t factor);

// State of the stochastic convolution Z_t = int_0^t e^{-(t-s)A} Q dL_s,
// advanced by the exact per-mode Ornstein-Uhlenbeck recursion
//   z_k <- exp(-k^2 h) z_k + beta_k sqrt(ds) xi_k.
struct ConvolutionState {
    SpectralField z;
    NoiseIntensity q;
    double t = 0.0;

    ConvolutionState(NoiseIntensity q_, int n_modes) : z(n_modes), q(std::move(q_)) {}
};

ConvolutionState step_convolution(const ConvolutionState& state, double h, double ds,
                                  std::span<const double> xi);

// Runs the recursion along a whole path and returns Z at grid point i.
SpectralField convolution_recursive(const NoisePath& path, const NoiseIntensity& q,
                                    std::size_t i_target);

// Independent route: evaluates the integration-by-parts representation
//   Z_t = Q L_t - int_0^t A e^{-(t-s)A} Q L_s ds
// for the piecewise-constant cadlag path L. With quad_points == 0 each
// segment integral uses its closed form; quad_points >= 1 uses midpoint
// quadrature with that many nodes per segment.
SpectralField convolution_by_parts(const NoisePath& path, const NoiseIntensity& q,
                                   std::size_t i_target, int quad_points = 0);

// Monte Carlo scaling check for the running supremum of ||Z_t||_theta.
struct MomentScalingRow {
    double horizon = 0.0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};
struct MomentScalingReport {
    std::vector<MomentScalingRow> rows;
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    double target_slope = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// E( sup_{t<=T} ||Z_t||_theta^p ) over a geometric grid of horizons; the
// log-log slope is compared against p/alpha. Rejects p >= alpha.
MomentScalingReport verify_convolution_moments(double alpha, const NoiseIntensity& q, double p,
                                               double theta, std::span<const double> horizons,
                                               std::size_t steps_per_horizon,
                                               std::size_t n_paths, double tolerance,
                                               std::uint64_t seed);

// Streaming helper: one path's running sup of ||Z||_theta at horizon T.
double convolution_sup_norm(double alpha, const NoiseIntensity& q, double theta, double horizon,
                            std::size_t n_steps, std::uint64_t seed);

} // namespace sburg
