#include "sburg/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sburg/errors.hpp"

namespace sburg {

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);

void check_same_size(const SpectralField& u, const SpectralField& v) {
    if (u.n_max != v.n_max) throw std::invalid_argument("fields must share n_max");
}
} // namespace

bool SpectralField::finite() const {
    for (double x : c)
        if (!std::isfinite(x)) return false;
    for (double x : s)
        if (!std::isfinite(x)) return false;
    return true;
}

SpectralField SpectralField::from_trig_cos(int n_max, int k, double amp) {
    SpectralField u(n_max);
    u.cos_coeff(k) = amp * kSqrtPi;
    return u;
}

SpectralField SpectralField::from_trig_sin(int n_max, int k, double amp) {
    SpectralField u(n_max);
    u.sin_coeff(k) = amp * kSqrtPi;
    return u;
}

SpectralField operator+(const SpectralField& u, const SpectralField& v) {
    check_same_size(u, v);
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        w.c[i] = u.c[i] + v.c[i];
        w.s[i] = u.s[i] + v.s[i];
    }
    return w;
}

SpectralField operator-(const SpectralField& u, const SpectralField& v) {
    check_same_size(u, v);
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        w.c[i] = u.c[i] - v.c[i];
        w.s[i] = u.s[i] - v.s[i];
    }
    return w;
}

SpectralField operator*(double a, const SpectralField& u) {
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        w.c[i] = a * u.c[i];
        w.s[i] = a * u.s[i];
    }
    return w;
}

double inner0(const SpectralField& u, const SpectralField& v) {
    check_same_size(u, v);
    double acc = 0.0;
    for (int i = 0; i < u.n_max; ++i) acc += u.c[i] * v.c[i] + u.s[i] * v.s[i];
    return acc;
}

double sobolev_norm(const SpectralField& u, double gamma) {
    double acc = 0.0;
    for (int i = 0; i < u.n_max; ++i) {
        const double k = static_cast<double>(i + 1);
        acc += std::pow(k, 2.0 * gamma) * (u.c[i] * u.c[i] + u.s[i] * u.s[i]);
    }
    return std::sqrt(acc);
}

SpectralField apply_fractional_power(const SpectralField& u, double gamma) {
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        const double f = std::pow(static_cast<double>(i + 1), gamma);
        w.c[i] = f * u.c[i];
        w.s[i] = f * u.s[i];
    }
    return w;
}

SpectralField apply_semigroup(const SpectralField& u, double t) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        const double k = static_cast<double>(i + 1);
        const double f = std::exp(-k * k * t);
        w.c[i] = f * u.c[i];
        w.s[i] = f * u.s[i];
    }
    return w;
}

SpectralField project(const SpectralField& u, int n) {
    if (n < 0) throw std::invalid_argument("project: n must be >= 0");
    SpectralField w = u;
    for (int i = n; i < u.n_max; ++i) {
        w.c[i] = 0.0;
        w.s[i] = 0.0;
    }
    return w;
}

double evaluate(const SpectralField& u, double x) {
    double acc = 0.0;
    for (int i = 0; i < u.n_max; ++i) {
        const double k = static_cast<double>(i + 1);
        acc += u.c[i] * std::cos(k * x) + u.s[i] * std::sin(k * x);
    }
    return acc / kSqrtPi;
}

NoiseIntensity::NoiseIntensity(double theta_, double theta_prime_, double delta_,
                               std::vector<double> beta_)
    : theta(theta_), theta_prime(theta_prime_), delta(delta_), beta(std::move(beta_)) {
    if (delta <= 0.0) throw ConfigError("noise intensity: delta must be > 0");
    if (theta < theta_prime) throw ConfigError("noise intensity: requires theta >= theta_prime");
    for (std::size_t i = 0; i < beta.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double lo = delta * std::pow(k, -theta);
        const double hi = std::pow(k, -theta_prime) / delta;
        const double abs_b = std::abs(beta[i]);
        const double slack = 1e-12 * (1.0 + hi);
        if (abs_b + slack < lo || abs_b > hi + slack)
            throw ConfigError("noise intensity: |beta_k| outside [delta k^-theta, k^-theta'/delta] at k=" +
                              std::to_string(i + 1));
    }
}

NoiseIntensity NoiseIntensity::power_law(double theta, double theta_prime, double delta, int n_max) {
    std::vector<double> b(static_cast<std::size_t>(n_max));
    for (int k = 1; k <= n_max; ++k)
        b[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), -theta);
    return NoiseIntensity(theta, theta_prime, delta, std::move(b));
}

double NoiseIntensity::k_gamma(double gamma) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        acc += 2.0 * std::pow(k, 2.0 * gamma) * beta[i] * beta[i];
    }
    return acc;
}

SpectralField q_apply(const NoiseIntensity& q, const SpectralField& u) {
    if (q.n_max() < u.n_max) throw std::invalid_argument("q_apply: intensity shorter than field");
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        w.c[i] = q.beta[i] * u.c[i];
        w.s[i] = q.beta[i] * u.s[i];
    }
    return w;
}

SpectralField q_inverse(const NoiseIntensity& q, const SpectralField& u) {
    if (q.n_max() < u.n_max) throw std::invalid_argument("q_inverse: intensity shorter than field");
    SpectralField w(u.n_max);
    for (int i = 0; i < u.n_max; ++i) {
        if (q.beta[i] == 0.0)
            throw SingularIntensityError("q_inverse: beta_k == 0 at k=" + std::to_string(i + 1));
        w.c[i] = u.c[i] / q.beta[i];
        w.s[i] = u.s[i] / q.beta[i];
    }
    return w;
}

std::string field_to_csv_row(const SpectralField& u) {
    std::ostringstream os;
    os << u.n_max;
    char buf[32];
    for (int i = 0; i < u.n_max; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", u.c[i]);
        os << ',' << buf;
    }
    for (int i = 0; i < u.n_max; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", u.s[i]);
        os << ',' << buf;
    }
    return os.str();
}

SpectralField field_from_csv_row(const std::string& row) {
    std::istringstream is(row);
    std::string tok;
    if (!std::getline(is, tok, ',')) throw ConfigError("field row: empty");
    const int n = std::stoi(tok);
    if (n < 0) throw ConfigError("field row: negative n_max");
    SpectralField u(n);
    for (int i = 0; i < 2 * n; ++i) {
        if (!std::getline(is, tok, ',')) throw ConfigError("field row: too few coefficients");
        const double v = std::stod(tok);
        if (i < n)
            u.c[i] = v;
        else
            u.s[i - n] = v;
    }
    if (std::getline(is, tok, ',')) throw ConfigError("field row: trailing data");
    return u;
}

SpectralField random_field(int n_max, double decay, double target_norm, RngStream& rng,
                           double norm_gamma) {
    SpectralField u(n_max);
    for (int i = 0; i < n_max; ++i) {
        const double scale = std::pow(static_cast<double>(i + 1), -decay);
        u.c[i] = scale * rng.normal();
        u.s[i] = scale * rng.normal();
    }
    const double nrm = sobolev_norm(u, norm_gamma);
    if (nrm > 0.0 && target_norm > 0.0) return (target_norm / nrm) * u;
    return u;
}

} // namespace sburg
