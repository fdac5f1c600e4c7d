#pragma once

#include <cstdint>
#include <utility>

#include "sburg/rng.hpp"
#include "sburg/stats.hpp"

namespace sburg {

// Sampler for the increasing (alpha/2)-stable subordinator S_t normalized by
// E exp(-eta S_t) = exp(-t eta^{alpha/2}), alpha in (1,2).
//
// Draws use Kanter's representation of the positive stable law (the totally
// skewed special case of Chambers-Mallows-Stuck), which is exact: with
// rho = alpha/2, U ~ Uniform(0,pi), W ~ Exp(1),
//   S_1 = ( a(U) / W )^{(1-rho)/rho},
//   a(u) = sin((1-rho)u) sin(rho u)^{rho/(1-rho)} / sin(u)^{1/(1-rho)},
// and self-similarity gives S_dt = dt^{2/alpha} S_1 in law.
class StableSubordinatorSampler {
  public:
    StableSubordinatorSampler(double alpha, std::uint64_t seed);

    double alpha() const { return alpha_; }

    // One draw of S_{t+dt} - S_t, strictly positive. Rejects dt <= 0.
    double sample_increment(double dt);

    // One draw of the standard variate S_1.
    double sample_unit();

    RngStream& stream() { return rng_; }

  private:
    double alpha_;
    double rho_;
    RngStream rng_;
};

// Monte Carlo estimate of E(S_t^{-q}).
MeanStderr estimate_negative_moment(StableSubordinatorSampler& s, double q, double t,
                                    std::size_t n_samples);

// Closed form for the same quantity in this normalization:
//   E(S_t^{-q}) = t^{-2q/alpha} Gamma(2q/alpha + 1) / Gamma(q + 1).
double negative_moment_exact(double alpha, double q, double t);

// Empirical frequency of {S_t <= r}.
double small_ball_probability(StableSubordinatorSampler& s, double r, double t,
                              std::size_t n_samples);

} // namespace sburg
