#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sburg/spectral.hpp"

namespace sburg {

// Full experiment description, parsed from flat `key = value` text.
// Unknown keys are hard errors; range violations name the violated
// constraint.
struct SimConfig {
    double alpha = 1.5;
    double theta = 1.75;
    double theta_prime = 1.75;
    double delta = 1.0;
    int n_modes = 32;
    double dt = 1e-3;
    double t_end = 1.0;
    double r_truncation = 0.0; // 0 means "none"
    std::uint64_t seed = 42;
    std::size_t ensemble_size = 1000;
    std::vector<std::string> observables = {"norm0", "norm1", "cos_1", "sin_1"};
    std::string output_path = "out";
    std::string initial_field; // e.g. "0.1 sin 1, 0.05 cos 2"; empty = zero field
    std::size_t record_stride = 10;
    double censor_budget = 0.05;

    bool truncation_enabled() const { return r_truncation > 0.0; }
};

// Parses and validates. With require_ergodic_regime the noise-law exponents
// must satisfy 3/2 < theta' <= theta < 2 on top of the base constraints.
SimConfig parse_config(const std::string& text, bool require_ergodic_regime = false);

SimConfig load_config_file(const std::string& path, bool require_ergodic_regime = false);

// Canonical `key = value` rendering (stable ordering, 17 significant digits).
std::string config_to_text(const SimConfig& cfg);

// "0.1 sin 1, 0.05 cos 2" -> the corresponding field. Empty -> zero field.
SpectralField parse_initial_field(const std::string& desc, int n_modes);

} // namespace sburg
