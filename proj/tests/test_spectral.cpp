#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sburg/errors.hpp"
#include "sburg/fft.hpp"
#include "sburg/rng.hpp"
#include "sburg/spectral.hpp"

using namespace sburg;

TEST_CASE("sobolev norm: single-mode closed forms") {
    SpectralField u(8);
    u.cos_coeff(2) = 1.0; // unit coefficient on the cos(2x) basis element
    CHECK(sobolev_norm(u, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sobolev_norm(u, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    const SpectralField zero(8);
    CHECK(sobolev_norm(zero, -1.3) == 0.0);
    CHECK(sobolev_norm(zero, 2.0) == 0.0);
}

TEST_CASE("spectral gap: |u|_0 <= |u|_1 for random fields") {
    RngStream rng(123);
    for (int i = 0; i < 50; ++i) {
        const SpectralField u = random_field(8, 0.5, 1.0, rng);
        CHECK(sobolev_norm(u, 0.0) <= sobolev_norm(u, 1.0) + 1e-14);
    }
}

TEST_CASE("fractional power: identity, scaling, inverse pair") {
    SpectralField u(8);
    u.cos_coeff(3) = 1.0;
    const SpectralField id = apply_fractional_power(u, 0.0);
    CHECK(id.cos_coeff(3) == doctest::Approx(1.0));
    const SpectralField sq = apply_fractional_power(u, 2.0);
    CHECK(sq.cos_coeff(3) == doctest::Approx(9.0));

    RngStream rng(7);
    const SpectralField v = random_field(8, 0.0, 1.0, rng);
    const SpectralField round = apply_fractional_power(apply_fractional_power(v, 1.7), -1.7);
    for (int k = 1; k <= 8; ++k) {
        CHECK(round.cos_coeff(k) == doctest::Approx(v.cos_coeff(k)).epsilon(1e-13));
        CHECK(round.sin_coeff(k) == doctest::Approx(v.sin_coeff(k)).epsilon(1e-13));
    }
}

TEST_CASE("semigroup: identity at t=0, mode decay, negative t rejected") {
    SpectralField u(4);
    u.sin_coeff(1) = 1.0;
    CHECK(apply_semigroup(u, 0.0).sin_coeff(1) == doctest::Approx(1.0));
    CHECK(apply_semigroup(u, 0.5).sin_coeff(1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(apply_semigroup(u, -0.1), std::invalid_argument);
}

TEST_CASE("semigroup property: e^{-sA} e^{-tA} = e^{-(s+t)A}") {
    RngStream rng(11);
    const SpectralField u = random_field(16, 0.3, 2.0, rng);
    const SpectralField a = apply_semigroup(apply_semigroup(u, 0.3), 0.45);
    const SpectralField b = apply_semigroup(u, 0.75);
    for (int k = 1; k <= 16; ++k)
        CHECK(a.cos_coeff(k) == doctest::Approx(b.cos_coeff(k)).epsilon(1e-13));
}

TEST_CASE("smoothing bound per mode: k^{2g} e^{-k^2 t} <= g^g e^{-g} t^{-g}") {
    for (double g : {0.5, 1.0}) {
        const double c = std::pow(g, g) * std::exp(-g);
        for (double t : {0.01, 0.1, 1.0}) {
            for (int k = 1; k <= 256; ++k) {
                const double lhs = std::pow(k, 2.0 * g) * std::exp(-double(k) * k * t);
                CHECK(lhs <= c * std::pow(t, -g) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("smoothing bound on random fields") {
    RngStream rng(2024);
    for (double g : {0.5, 1.0}) {
        const double c = std::pow(g, g) * std::exp(-g);
        for (double t : {0.01, 0.1, 1.0}) {
            for (int rep = 0; rep < 20; ++rep) {
                const SpectralField u = random_field(32, 0.0, 1.0, rng);
                // A^g e^{-tA} u scales wavenumber k by k^{2g} exp(-k^2 t)
                const SpectralField v =
                    apply_fractional_power(apply_semigroup(u, t), 2.0 * g);
                CHECK(sobolev_norm(v, 0.0) <=
                      c * std::pow(t, -g) * sobolev_norm(u, 0.0) * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("noise intensity: power-law bounds and the Lemma 2.1-style estimates") {
    const NoiseIntensity q = NoiseIntensity::power_law(1.75, 1.75, 1.0, 32);

    SpectralField u(32);
    u.cos_coeff(2) = 1.0;
    CHECK(q_apply(q, u).cos_coeff(2) == doctest::Approx(std::pow(2.0, -1.75)).epsilon(1e-14));
    CHECK(q_apply(q, u).cos_coeff(2) == doctest::Approx(0.29730).epsilon(1e-4));

    SpectralField v(32);
    v.sin_coeff(3) = 1.0;
    CHECK(q_inverse(q, v).sin_coeff(3) == doctest::Approx(std::pow(3.0, 1.75)).epsilon(1e-14));
    CHECK(q_inverse(q, v).sin_coeff(3) == doctest::Approx(6.8385).epsilon(1e-4));

    RngStream rng(99);
    for (int i = 0; i < 1000; ++i) {
        const SpectralField w = random_field(32, 0.25, 1.0, rng);
        // |A^{theta'/2} Q w|_0 <= |w|_0 / delta
        const SpectralField qw = apply_fractional_power(q_apply(q, w), 1.75);
        CHECK(sobolev_norm(qw, 0.0) <= sobolev_norm(w, 0.0) * (1.0 + 1e-12));
        // |Q^{-1} w|_0 <= |A^{theta/2} w|_0 / delta
        const SpectralField iw = q_inverse(q, w);
        const SpectralField aw = apply_fractional_power(w, 1.75);
        CHECK(sobolev_norm(iw, 0.0) <= sobolev_norm(aw, 0.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("q_apply with unit intensity is the identity; q_inverse round-trips") {
    std::vector<double> ones(16, 1.0);
    const NoiseIntensity q(0.0, 0.0, 1.0, ones);
    RngStream rng(5);
    const SpectralField u = random_field(16, 0.5, 1.0, rng);
    const SpectralField qu = q_apply(q, u);
    for (int k = 1; k <= 16; ++k) CHECK(qu.cos_coeff(k) == u.cos_coeff(k));

    const NoiseIntensity qp = NoiseIntensity::power_law(1.75, 1.75, 1.0, 16);
    const SpectralField round = q_inverse(qp, q_apply(qp, u));
    for (int k = 1; k <= 16; ++k)
        CHECK(round.sin_coeff(k) == doctest::Approx(u.sin_coeff(k)).epsilon(1e-13));
}

TEST_CASE("q_inverse rejects a vanishing beta_k") {
    std::vector<double> b(4, 1.0);
    b[2] = 0.0;
    CHECK_THROWS_AS(NoiseIntensity(0.0, 0.0, 1.0, b), ConfigError);
    // bypass the constructor check by building a legal intensity, then zeroing
    NoiseIntensity q = NoiseIntensity::power_law(1.75, 1.75, 1.0, 4);
    q.beta[1] = 0.0;
    SpectralField u(4);
    u.cos_coeff(2) = 1.0;
    CHECK_THROWS_AS(q_inverse(q, u), SingularIntensityError);
}

TEST_CASE("intensity constructor enforces the two-sided bound") {
    std::vector<double> too_big = {2.0, 1.0};
    CHECK_THROWS_AS(NoiseIntensity(1.75, 1.75, 1.0, too_big), ConfigError);
    std::vector<double> too_small = {1.0, 1e-6};
    CHECK_THROWS_AS(NoiseIntensity(1.75, 1.75, 1.0, too_small), ConfigError);
}

TEST_CASE("projection: identity beyond n_max, idempotent, monotone tail") {
    RngStream rng(31);
    const SpectralField u = random_field(16, 0.0, 1.0, rng);
    const SpectralField full = project(u, 16);
    for (int k = 1; k <= 16; ++k) CHECK(full.cos_coeff(k) == u.cos_coeff(k));
    const SpectralField p5 = project(u, 5);
    const SpectralField p5b = project(p5, 5);
    for (int k = 1; k <= 16; ++k) CHECK(p5.sin_coeff(k) == p5b.sin_coeff(k));

    for (double g : {0.0, 1.0}) {
        double prev = -1.0;
        for (int n = 16; n >= 1; --n) {
            const double tail = sobolev_norm(u - project(u, n), g);
            CHECK(tail >= prev - 1e-15);
            prev = tail;
        }
    }
}

TEST_CASE("Parseval: coefficient norm matches the grid L2 norm") {
    RngStream rng(77);
    const SpectralField u = random_field(12, 0.2, 1.3, rng);
    const int m = 2 * 12 + 1;
    double grid_l2_sq = 0.0;
    for (int j = 0; j < m; ++j) {
        const double x = 2.0 * std::numbers::pi * j / m;
        // unnormalized trig polynomial: sqrt(pi) * u(x)
        double v = 0.0;
        for (int k = 1; k <= 12; ++k)
            v += u.cos_coeff(k) * std::cos(k * x) + u.sin_coeff(k) * std::sin(k * x);
        grid_l2_sq += v * v;
    }
    grid_l2_sq *= 2.0 * std::numbers::pi / m;
    const double n0sq = std::pow(sobolev_norm(u, 0.0), 2.0);
    CHECK(n0sq == doctest::Approx(grid_l2_sq / std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("evaluate agrees with the basis definition") {
    SpectralField u = SpectralField::from_trig_sin(4, 1, 1.0); // sin(x)
    CHECK(evaluate(u, 0.5) == doctest::Approx(std::sin(0.5)).epsilon(1e-13));
    CHECK(sobolev_norm(u, 0.0) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("eigenvalue-sum threshold: sum k^{-2 theta} diverges below 1/2, converges above") {
    auto partial = [](double theta, int n) {
        double s = 0.0;
        for (int k = 1; k <= n; ++k) s += 2.0 * std::pow(double(k), -2.0 * theta);
        return s;
    };
    // theta = 0.4: partial sums keep growing by more than the analytic lower
    // tail bound integral_{N}^{2N} x^{-0.8} dx
    const double grow = partial(0.4, 20000) - partial(0.4, 10000);
    const double lower = 2.0 * (std::pow(20000.0, 0.2) - std::pow(10000.0, 0.2)) / 0.2;
    CHECK(grow >= lower * 0.99);
    // theta = 0.6: the tail is bounded by the integral tail and the partial
    // sums stabilize within it
    const double tail_bound = 2.0 * std::pow(10000.0, -0.2) / 0.2;
    CHECK(partial(0.6, 20000) - partial(0.6, 10000) <= tail_bound);
    CHECK(partial(0.6, 1000000) - partial(0.6, 10000) <= tail_bound);
}

TEST_CASE("csv row round-trip is bit exact") {
    RngStream rng(8);
    const SpectralField u = random_field(6, 0.7, 2.345, rng);
    const SpectralField v = field_from_csv_row(field_to_csv_row(u));
    CHECK(v.n_max == u.n_max);
    for (int k = 1; k <= 6; ++k) {
        CHECK(v.cos_coeff(k) == u.cos_coeff(k));
        CHECK(v.sin_coeff(k) == u.sin_coeff(k));
    }
    CHECK_THROWS_AS(field_from_csv_row("3,1.0,2.0"), ConfigError);
}

TEST_CASE("fft matches a direct dft") {
    RngStream rng(404);
    const std::size_t n = 64;
    std::vector<std::complex<double>> x(n);
    for (auto& c : x) c = {rng.normal(), rng.normal()};
    auto y = x;
    fft_pow2(y, -1);
    for (std::size_t k = 0; k < n; k += 7) {
        std::complex<double> direct(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * double(j * k) / double(n);
            direct += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(y[k] - direct) < 1e-10);
    }
}
