#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sburg/nonlinearity.hpp"
#include "sburg/noise_path.hpp"
#include "sburg/spectral.hpp"
#include "sburg/subordinator.hpp"

namespace sburg {

// Drift selector: the full Burgers term -B(u), the smoothly truncated
// -B_R(u), or no nonlinearity at all (linear test hook).
enum class Drift { burgers, truncated, none };

struct Dynamics {
    double alpha = 1.5;
    NoiseIntensity q;
    Drift drift = Drift::burgers;
    double r_truncation = 1.0;    // ball radius for Drift::truncated
    double exit_radius = 0.0;     // track tau = inf{t: ||u||_1 >= 5*exit_radius}; 0 = off
    double censor_threshold = 1e12;
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> norm0;
    std::vector<double> norm1;
    std::vector<std::vector<double>> low_modes; // c1,s1,...,c4,s4 per record point
    std::vector<SpectralField> states;          // filled only when requested
    double exit_time = std::numeric_limits<double>::infinity();
    bool censored = false;
    double censor_time = 0.0;

    std::size_t n_points() const { return times.size(); }
};

// One exponential-Euler step: u <- exp(-hA)(u + h F(u)) + Q dL, the noise
// increment entering undamped at the step end. dL = sqrt(ds) * xi.
class SpdeStepper {
  public:
    SpdeStepper(const Dynamics& dyn, int n_max, double h);

    void step(SpectralField& u, double ds, std::span<const double> xi);

    // Deterministic part only: u <- exp(-hA)(u + h F(u)).
    void drift_step(SpectralField& u);

    bool is_finite(const SpectralField& u) const;

    double h() const { return h_; }
    const Dynamics& dynamics() const { return dyn_; }

  private:
    SpectralField drift_term(const SpectralField& u);

    Dynamics dyn_;
    int n_max_;
    double h_;
    std::vector<double> damp_;
    BilinearEvaluator eval_;
};

struct SimSpec {
    double h = 1e-3;
    double t_end = 1.0;
    std::size_t record_stride = 1; // record every k-th step
    bool record_states = false;
};

// Full trajectory with fresh noise drawn from (alpha, seed).
TrajectoryRecord simulate(const SpectralField& phi, const Dynamics& dyn, const SimSpec& spec,
                          std::uint64_t seed);

// Same dynamics driven by a pre-drawn path (used by refinement tests).
TrajectoryRecord simulate_on_path(const SpectralField& phi, const Dynamics& dyn,
                                  const NoisePath& path, std::size_t record_stride = 1,
                                  bool record_states = false);

// Synchronous coupling: both trajectories consume the identical noise, and
// the difference path is propagated through the noise-free recursion
//   d <- exp(-hA)(d + h (F(u1) - F(u2))).
struct CoupledRecord {
    TrajectoryRecord first;
    TrajectoryRecord second;
    std::vector<double> diff_norm0;
    std::vector<double> diff_norm1;
    bool censored = false;
};
CoupledRecord simulate_coupled(const SpectralField& phi1, const SpectralField& phi2,
                               const Dynamics& dyn, const SimSpec& spec, std::uint64_t seed);

// Bounded observable; estimates clamp to [-bound, bound] so the sup norm
// contract is enforced mechanically.
struct Observable {
    std::string name;
    double bound = 1.0;
    std::function<double(const SpectralField&)> fn;

    double operator()(const SpectralField& u) const {
        const double v = fn(u);
        return v > bound ? bound : (v < -bound ? -bound : v);
    }
};

// Named battery: norm0, norm1, cos_k / sin_k for k = 1..4.
Observable make_observable(const std::string& name);

struct SemigroupEstimate {
    std::string phi_desc;
    double t = 0.0;
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_censored = 0;
};

// Monte Carlo estimate of E Phi(u_t(phi)) over independent trajectories
// with derived per-trajectory seeds. Censored paths are excluded and counted.
SemigroupEstimate estimate_semigroup(const SpectralField& phi, const Observable& obs, double t,
                                     std::size_t n_samples, const Dynamics& dyn, double h,
                                     std::uint64_t seed);

} // namespace sburg
