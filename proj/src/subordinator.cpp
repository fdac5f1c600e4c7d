#include "sburg/subordinator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sburg {

StableSubordinatorSampler::StableSubordinatorSampler(double alpha, std::uint64_t seed)
    : alpha_(alpha), rho_(alpha / 2.0), rng_(seed) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("subordinator: alpha must lie in (1,2)");
}

double StableSubordinatorSampler::sample_unit() {
    // Kanter's method; no rejection, every draw is finite and > 0.
    const double rho = rho_;
    double u, w;
    do {
        u = rng_.uniform01() * std::numbers::pi;
        w = rng_.exponential();
    } while (w <= 0.0);
    const double su = std::sin(u);
    const double a = std::sin((1.0 - rho) * u) *
                     std::pow(std::sin(rho * u), rho / (1.0 - rho)) /
                     std::pow(su, 1.0 / (1.0 - rho));
    return std::pow(a / w, (1.0 - rho) / rho);
}

double StableSubordinatorSampler::sample_increment(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be > 0");
    return std::pow(dt, 2.0 / alpha_) * sample_unit();
}

MeanStderr estimate_negative_moment(StableSubordinatorSampler& s, double q, double t,
                                    std::size_t n_samples) {
    if (!(q >= 0.0) || !(t > 0.0)) throw std::invalid_argument("estimate_negative_moment: bad q or t");
    if (n_samples < 1000) throw std::invalid_argument("estimate_negative_moment: need >= 1e3 samples");
    std::vector<double> xs(n_samples);
    for (auto& x : xs) x = std::pow(s.sample_increment(t), -q);
    return mean_stderr(xs);
}

double negative_moment_exact(double alpha, double q, double t) {
    const double rho = alpha / 2.0;
    return std::pow(t, -q / rho) * std::exp(std::lgamma(q / rho + 1.0) - std::lgamma(q + 1.0));
}

double small_ball_probability(StableSubordinatorSampler& s, double r, double t,
                              std::size_t n_samples) {
    if (!(r > 0.0) || !(t > 0.0)) throw std::invalid_argument("small_ball_probability: bad r or t");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n_samples; ++i)
        if (s.sample_increment(t) <= r) ++hits;
    return static_cast<double>(hits) / static_cast<double>(n_samples);
}

} // namespace sburg
