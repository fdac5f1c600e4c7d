#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sburg/rng.hpp"
#include "sburg/stats.hpp"
#include "sburg/subordinator.hpp"

using namespace sburg;

namespace {

// Oracle for E S_1^{-q}: numerical Mellin-type integral of the Laplace
// transform, E S^{-q} = (1/Gamma(q)) int_0^inf eta^{q-1} e^{-eta^{alpha/2}} d eta,
// evaluated by midpoint quadrature on a log grid. Independent of both the
// sampler and the closed form it checks.
double negative_moment_quadrature(double alpha, double q) {
    const double rho = alpha / 2.0;
    double acc = 0.0;
    const int n = 120000;
    const double lo = -120.0, hi = 40.0; // eta = e^y; lo deep enough for small q
    const double dy = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        const double y = lo + (i + 0.5) * dy;
        const double eta = std::exp(y);
        acc += std::pow(eta, q) * std::exp(-std::pow(eta, rho)) * dy; // eta^{q-1} * eta dy
    }
    return acc / std::tgamma(q);
}

} // namespace

TEST_CASE("closed-form negative moment agrees with the quadrature oracle") {
    // trust anchor: the identity must give exactly 1 at q = 0
    CHECK(negative_moment_exact(1.5, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (double alpha : {1.2, 1.5, 1.8})
        for (double q : {0.25, 0.5, 1.0})
            CHECK(negative_moment_exact(alpha, q, 1.0) ==
                  doctest::Approx(negative_moment_quadrature(alpha, q)).epsilon(1e-6));
    // t-scaling: E S_t^{-q} = t^{-2q/alpha} E S_1^{-q}
    CHECK(negative_moment_exact(1.5, 1.0, 0.25) ==
          doctest::Approx(std::pow(0.25, -4.0 / 3.0) * negative_moment_exact(1.5, 1.0, 1.0))
              .epsilon(1e-12));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(StableSubordinatorSampler(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(StableSubordinatorSampler(2.0, 1), std::invalid_argument);
    StableSubordinatorSampler s(1.5, 1);
    CHECK_THROWS_AS(s.sample_increment(0.0), std::invalid_argument);
    CHECK_THROWS_AS(s.sample_increment(-1.0), std::invalid_argument);
}

TEST_CASE("increments are strictly positive and finite") {
    StableSubordinatorSampler s(1.5, 99);
    bool all_ok = true;
    for (int i = 0; i < 2000000; ++i) {
        const double x = s.sample_increment(0.01);
        all_ok = all_ok && x > 0.0 && std::isfinite(x);
    }
    CHECK(all_ok);
}

TEST_CASE("Laplace transform at eta=1: MC mean of e^{-S_1} = 1/e for every alpha") {
    for (double alpha : {1.2, 1.5, 1.8}) {
        StableSubordinatorSampler s(alpha, 4242 + int(alpha * 10));
        const std::size_t n = 200000;
        std::vector<double> xs(n);
        for (auto& x : xs) x = std::exp(-s.sample_increment(1.0));
        const MeanStderr ms = mean_stderr(xs);
        CHECK(std::abs(ms.mean - std::exp(-1.0)) <= 3.0 * ms.stderr_);
    }
}

TEST_CASE("Laplace transform at eta=2, alpha=1.5") {
    StableSubordinatorSampler s(1.5, 777);
    const std::size_t n = 200000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = std::exp(-2.0 * s.sample_increment(1.0));
    const MeanStderr ms = mean_stderr(xs);
    const double target = std::exp(-std::pow(2.0, 0.75)); // = 0.18608...
    CHECK(target == doctest::Approx(0.18608).epsilon(2e-4));
    CHECK(std::abs(ms.mean - target) <= 3.0 * ms.stderr_);
}

TEST_CASE("self-similarity: S_{0.5} vs 0.5^{2/alpha} S_1 by two-sample KS") {
    const double alpha = 1.5;
    StableSubordinatorSampler s1(alpha, 31337);
    StableSubordinatorSampler s2(alpha, 1337);
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = s1.sample_increment(0.5);
    for (auto& x : b) x = std::pow(0.5, 2.0 / alpha) * s2.sample_increment(1.0);
    const double d = ks_statistic(a, b);
    CHECK(d < ks_critical_value(n, n, 0.01));
}

TEST_CASE("additivity in law: S_a + S'_b matches S_{a+b} by two-sample KS") {
    const double alpha = 1.5;
    StableSubordinatorSampler s(alpha, 555);
    StableSubordinatorSampler t(alpha, 556);
    const std::size_t n = 100000;
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = s.sample_increment(0.3) + t.sample_increment(0.7);
    StableSubordinatorSampler u(alpha, 557);
    for (auto& x : b) x = u.sample_increment(1.0);
    CHECK(ks_statistic(a, b) < ks_critical_value(n, n, 0.01));
}

TEST_CASE("negative moment estimate: q=0 gives exactly 1") {
    StableSubordinatorSampler s(1.5, 17);
    const MeanStderr ms = estimate_negative_moment(s, 0.0, 0.7, 1000);
    CHECK(ms.mean == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ms.stderr_ == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("negative moment estimate matches the Mellin oracle at q=0.5, t=1") {
    StableSubordinatorSampler s(1.5, 2718);
    const MeanStderr ms = estimate_negative_moment(s, 0.5, 1.0, 100000);
    const double target = negative_moment_exact(1.5, 0.5, 1.0);
    CHECK(std::abs(ms.mean - target) <= 3.0 * ms.stderr_);
}

TEST_CASE("negative moment t-scaling: log-log slope = -2q/alpha") {
    const double alpha = 1.5;
    std::vector<double> lx, ly;
    for (int e = 6; e >= 1; --e) {
        const double t = std::pow(2.0, -e);
        StableSubordinatorSampler s(alpha, 9000 + e);
        const MeanStderr ms = estimate_negative_moment(s, 1.0, t, 100000);
        lx.push_back(std::log(t));
        ly.push_back(std::log(ms.mean));
    }
    const LineFit f = fit_line(lx, ly);
    CHECK(std::abs(f.slope - (-4.0 / 3.0)) <= 0.1);
}

TEST_CASE("small ball: proper distribution and strictly positive mass near 0") {
    StableSubordinatorSampler s(1.5, 808);
    CHECK(small_ball_probability(s, 1e6, 0.01, 20000) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(small_ball_probability(s, 1.0, 1.0, 200000) > 0.0);
    // CDF monotonicity under common random numbers
    StableSubordinatorSampler a(1.5, 909);
    StableSubordinatorSampler b(1.5, 909);
    const double f_small = small_ball_probability(a, 0.5, 1.0, 50000);
    const double f_large = small_ball_probability(b, 2.0, 1.0, 50000);
    CHECK(f_small <= f_large);
}

TEST_CASE("determinism: same seed gives a bit-identical stream") {
    StableSubordinatorSampler a(1.7, 123456);
    StableSubordinatorSampler b(1.7, 123456);
    bool identical = true;
    for (int i = 0; i < 10000; ++i)
        identical = identical && a.sample_increment(0.1) == b.sample_increment(0.1);
    CHECK(identical);
}
