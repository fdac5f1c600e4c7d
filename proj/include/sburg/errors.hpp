#pragma once

#include <stdexcept>
#include <string>

namespace sburg {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration or parameter (bad range, unknown key, ...).
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A noise intensity with some beta_k == 0 cannot be inverted.
struct SingularIntensityError : Error {
    explicit SingularIntensityError(const std::string& msg) : Error(msg) {}
};

// A trajectory left the representable range (NaN or overflow).
// Carries the time stamp of the last finite state.
struct BlowUpError : Error {
    double t_last_finite;
    BlowUpError(const std::string& msg, double t) : Error(msg), t_last_finite(t) {}
};

// The Picard map failed to contract at the requested horizon.
struct NonContractionError : Error {
    double measured_factor;
    NonContractionError(const std::string& msg, double factor)
        : Error(msg), measured_factor(factor) {}
};

} // namespace sburg
