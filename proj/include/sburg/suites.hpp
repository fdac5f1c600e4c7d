#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sburg/config.hpp"
#include "sburg/diagnostics.hpp"
#include "sburg/picard.hpp"
#include "sburg/report.hpp"

namespace sburg {

// ---- shared check batteries -------------------------------------------------

struct CheckRow {
    std::string test;
    std::string parameter;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double target = 0.0;
    bool pass = false;
};

// MC mean of exp(-eta S_1) against exp(-eta^{alpha/2}) within 3 standard errors.
CheckRow laplace_transform_check(double alpha, double eta, std::size_t n_draws,
                                 std::uint64_t seed);

// log-log slope of E S_t^{-q} over t_grid against -2q/alpha within tol.
CheckRow negative_moment_slope_check(double alpha, double q, const std::vector<double>& t_grid,
                                     std::size_t n_draws, double tol, std::uint64_t seed);

// MC estimate of E S_1^{-q} against the closed form within 3 standard errors.
CheckRow negative_moment_value_check(double alpha, double q, std::size_t n_draws,
                                     std::uint64_t seed);

// empirical P(S_t <= r) > 0.
CheckRow small_ball_check(double alpha, double r, double t, std::size_t n_draws,
                          std::uint64_t seed);

struct PicardBattery {
    double r_ball = 0.5;
    int n_modes = 64;
    std::size_t n_pairs = 100;
    std::size_t grid_steps = 256;
    double contraction_bound = 0.55;
    double lipschitz_bound = 2.1;
    std::uint64_t seed = 42;
};

struct PicardBatteryResult {
    double horizon = 0.0;           // T(R)
    double trilinear_c = 0.0;
    double max_contraction = 0.0;
    double max_lipschitz = 0.0;
    double max_h1 = 0.0;            // sup ||w||_1 over data with ||phi||_1 <= R
    double h1_bound = 0.0;          // 3R
    bool contraction_pass = false;
    bool lipschitz_pass = false;
    bool h1_pass = false;
};

PicardBatteryResult run_picard_battery(const PicardBattery& cfg);

struct EnergyBatteryResult {
    EnergyConstants constants;
    double worst_validation_ratio = 0.0; // envelope LHS/RHS over validation set
    double worst_zero_z_ratio = 0.0;     // ||w_t||^2 e^t / ||phi||^2, Z == 0
    double zero_z_tolerance = 0.0;
    bool pass = false;
};

EnergyBatteryResult run_energy_battery(int n_modes, int n_calibration, int n_validation,
                                       double h, std::uint64_t seed);

struct GradientRow {
    int n_modes = 0;
    double t = 0.0;
    std::string direction;
    double bismut = 0.0;
    double bismut_se = 0.0;
    double fd = 0.0;
    double fd_se = 0.0;
    bool pass = false;
};

// Derivative-formula estimate vs central finite differences with common
// random numbers on a battery of (n, t); pass iff within combined 3 sigma.
std::vector<GradientRow> run_gradient_battery(const std::vector<int>& mode_counts,
                                              const std::vector<double>& times,
                                              std::size_t n_samples, double h, double alpha,
                                              std::uint64_t seed);

// ---- CLI suites -------------------------------------------------------------

struct SuiteOutput {
    bool pass = true;
    bool censor_budget_exceeded = false;
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    std::vector<SuiteResult> checks;
};

SuiteOutput run_simulate(const SimConfig& cfg);
SuiteOutput run_ensemble(const SimConfig& cfg);
SuiteOutput run_picard_solve(const SimConfig& cfg);
SuiteOutput run_verify_subordinator(const SimConfig& cfg);
SuiteOutput run_verify_convolution(const SimConfig& cfg);
SuiteOutput run_verify_picard(const SimConfig& cfg);
SuiteOutput run_gradient_check(const SimConfig& cfg);
SuiteOutput run_ergodicity(const SimConfig& cfg);

// Dispatch by subcommand name; throws ConfigError for unknown names.
SuiteOutput run_suite(const std::string& name, const SimConfig& cfg);
bool suite_requires_ergodic_regime(const std::string& name);

// Writes suite files plus manifest.json under cfg.output_path.
RunManifest write_suite_output(const SimConfig& cfg, const std::string& suite_name,
                               const SuiteOutput& out);

} // namespace sburg
