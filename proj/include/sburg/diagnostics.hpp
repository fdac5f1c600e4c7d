#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sburg/spde.hpp"

namespace sburg {

// ---- Lyapunov drift: E V(u_t) <= C_V e^{-rate t} V(phi) + K_V, V = 1 + ||.||_0.

struct LyapunovCurve {
    double phi_norm = 0.0;
    std::vector<double> times;
    std::vector<double> ev;        // Monte Carlo E V(u_t)
    std::vector<double> ev_stderr;
    std::size_t n_censored = 0;
    std::size_t n_paths = 0;
};

struct LyapunovReport {
    std::vector<LyapunovCurve> calibration;
    std::vector<LyapunovCurve> holdout;
    double c_v = 0.0;
    double rate = 0.0;
    double rate_stderr = 0.0;
    double k_v = 0.0;
    double censored_fraction = 0.0;
    bool rate_positive = false;    // rate > 0 with CI excluding 0
    bool holdout_ok = false;       // drift inequality on every held-out curve
    bool pass = false;
};

struct LyapunovConfig {
    int n_modes = 8;
    double h = 5e-4;
    double t_end = 12.0;
    std::size_t n_paths_calibration = 400;
    std::size_t n_paths_holdout = 160;
    std::size_t n_holdout = 20;
    std::size_t record_stride = 200;
    double censor_budget = 0.05;
};

LyapunovReport lyapunov_drift(std::vector<double> calibration_norms, const Dynamics& dyn,
                              const LyapunovConfig& cfg, std::uint64_t seed);

// ---- Synchronous-coupling contraction against 2 t^{-1/2} ||phi1 - phi2||_0.

struct CouplingReport {
    double r_ball = 0.0;
    double horizon = 0.0;                  // T(R) used for the second checkpoint
    std::vector<double> check_times;
    std::size_t n_paths = 0;
    std::size_t n_in_event = 0;            // paths with sup_{s<=1} ||Z_s||_1 <= R
    std::size_t n_violations = 0;          // event paths violating the bound anywhere
    double violation_fraction = 1.0;
    double max_ratio = 0.0;                // max over event paths/checkpoints
    bool pass = false;
};

struct CouplingConfig {
    double h = 1e-3;
    std::size_t n_paths = 400;
    double ratio_bound = 2.1;
    double max_violation_fraction = 0.01;
};

CouplingReport coupling_contraction(const SpectralField& phi1, const SpectralField& phi2,
                                    double r_ball, const Dynamics& dyn,
                                    const CouplingConfig& cfg, std::uint64_t seed);

// ---- Observable-law mixing proxy for the total-variation decay.

struct MixingReport {
    std::vector<std::string> observables;
    std::vector<double> times;
    std::vector<double> distances;     // max-over-battery KS per time
    double noise_floor = 0.0;          // KS critical value at the 1% level
    double gamma_star = 0.0;           // fitted decay rate of the proxy
    double gamma_stderr = 0.0;
    std::size_t fit_points = 0;
    bool pass = false;                 // gamma_star > 0 with CI excluding 0
};

struct MixingConfig {
    double h = 2e-3;
    double t_end = 20.0;
    std::size_t n_paths_per_side = 1000;
    std::size_t n_times = 60;
    std::vector<std::string> observables = {"cos_1", "sin_1", "cos_2", "sin_2", "norm0"};
};

MixingReport mixing_rate(const SpectralField& phi1, const SpectralField& phi2,
                         const Dynamics& dyn, const MixingConfig& cfg, std::uint64_t seed);

// Fraction of (time, observable) cells below the 1% critical value when both
// ensembles share the initial condition. Near 0.99 when the pipeline is sane.
double mixing_null_calibration(const SpectralField& phi, const Dynamics& dyn,
                               const MixingConfig& cfg, std::uint64_t seed);

// ---- Long-run statistics as an invariant-measure proxy.

struct InvariantProfileReport {
    std::vector<std::string> observables;
    std::vector<double> time_average;      // along one long path after burn-in
    std::vector<double> ensemble_average;  // across paths at the final time
    std::vector<double> combined_stderr;
    std::vector<double> ks_two_starts;     // long-run laws from two initial points
    double ks_critical = 0.0;
    bool pass = false;
};

struct InvariantProfileConfig {
    double h = 2e-3;
    double burn_in = 10.0;
    double t_end = 200.0;
    std::size_t sample_stride = 250;
    std::size_t n_paths = 400;
    double ensemble_t = 12.0;
    std::vector<std::string> observables = {"cos_1", "sin_1", "norm0"};
};

InvariantProfileReport invariant_measure_profile(const SpectralField& phi_a,
                                                 const SpectralField& phi_b, const Dynamics& dyn,
                                                 const InvariantProfileConfig& cfg,
                                                 std::uint64_t seed);

} // namespace sburg
