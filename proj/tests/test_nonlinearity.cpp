#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sburg/nonlinearity.hpp"
#include "sburg/rng.hpp"
#include "sburg/spectral.hpp"

using namespace sburg;

namespace {

// Brute-force convolution-sum oracle for the coefficients of u * v'.
// Works in plain product-to-sum trig algebra, independent of the padded
// transform route used by the implementation.
SpectralField bilinear_oracle(const SpectralField& u, const SpectralField& v) {
    const int n = u.n_max;
    SpectralField out(n);
    auto add_cos = [&](int j, double w) {
        if (j >= 1 && j <= n) out.cos_coeff(j) += w;
    };
    auto add_sin = [&](int j, double w) {
        if (j >= 1 && j <= n) out.sin_coeff(j) += w;
    };
    for (int k = 1; k <= n; ++k) {
        const double a = u.cos_coeff(k);
        const double b = u.sin_coeff(k);
        for (int m = 1; m <= n; ++m) {
            const double c = double(m) * v.sin_coeff(m);  // cos amplitude of v'
            const double d = -double(m) * v.cos_coeff(m); // sin amplitude of v'
            const int p = k + m;
            const int q = k - m;
            // cos k cos m = (cos(k-m) + cos(k+m))/2
            add_cos(std::abs(q), 0.5 * a * c);
            add_cos(p, 0.5 * a * c);
            // sin k sin m = (cos(k-m) - cos(k+m))/2
            add_cos(std::abs(q), 0.5 * b * d);
            add_cos(p, -0.5 * b * d);
            // sin k cos m = (sin(k+m) + sin(k-m))/2
            add_sin(p, 0.5 * b * c);
            if (q > 0) add_sin(q, 0.5 * b * c);
            if (q < 0) add_sin(-q, -0.5 * b * c);
            // cos k sin m = (sin(k+m) - sin(k-m))/2
            add_sin(p, 0.5 * a * d);
            if (q > 0) add_sin(q, -0.5 * a * d);
            if (q < 0) add_sin(-q, 0.5 * a * d);
        }
    }
    // stored coefficients carry one net factor pi^{-1/2} after the product
    const double scale = 1.0 / std::sqrt(std::numbers::pi);
    return scale * out;
}

} // namespace

TEST_CASE("trig identity: B(sin x, sin x) = sin(x) cos(x) = sin(2x)/2") {
    const SpectralField u = SpectralField::from_trig_sin(8, 1, 1.0);
    const SpectralField b = bilinear(u, u);
    const SpectralField expect = SpectralField::from_trig_sin(8, 2, 0.5);
    for (int k = 1; k <= 8; ++k) {
        CHECK(b.cos_coeff(k) == doctest::Approx(expect.cos_coeff(k)).epsilon(1e-13));
        CHECK(b.sin_coeff(k) == doctest::Approx(expect.sin_coeff(k)).epsilon(1e-13));
    }
}

TEST_CASE("trig identity: cos(x) d/dx sin(2x) = cos(x) + cos(3x)") {
    const SpectralField u = SpectralField::from_trig_cos(8, 1, 1.0);
    const SpectralField v = SpectralField::from_trig_sin(8, 2, 1.0);
    const SpectralField b = bilinear(u, v);
    const SpectralField expect = SpectralField::from_trig_cos(8, 1, 1.0) +
                                 SpectralField::from_trig_cos(8, 3, 1.0);
    for (int k = 1; k <= 8; ++k) {
        CHECK(b.cos_coeff(k) == doctest::Approx(expect.cos_coeff(k)).epsilon(1e-13));
        CHECK(b.sin_coeff(k) == doctest::Approx(expect.sin_coeff(k)).epsilon(1e-13));
    }
}

TEST_CASE("random pairs match the convolution-sum oracle to 1e-12") {
    RngStream rng(606);
    for (int rep = 0; rep < 50; ++rep) {
        const SpectralField u = random_field(8, 0.3, 1.5, rng);
        const SpectralField v = random_field(8, 0.3, 1.5, rng);
        const SpectralField got = bilinear(u, v);
        const SpectralField want = bilinear_oracle(u, v);
        for (int k = 1; k <= 8; ++k) {
            CHECK(got.cos_coeff(k) == doctest::Approx(want.cos_coeff(k)).epsilon(1e-12));
            CHECK(got.sin_coeff(k) == doctest::Approx(want.sin_coeff(k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("energy neutrality: <B(u,u), u> vanishes to roundoff") {
    RngStream rng(7007);
    for (int n : {8, 32, 64}) {
        for (int rep = 0; rep < 200; ++rep) {
            const SpectralField u = random_field(n, 0.4, rng.uniform(0.5, 4.0), rng);
            const double ip = std::abs(inner0(bilinear(u, u), u));
            const double n1 = sobolev_norm(u, 1.0);
            CHECK(ip < 1e-12 * n1 * n1 * n1);
        }
    }
}

TEST_CASE("mean-zero preservation: the product u u' has zero spatial mean") {
    RngStream rng(111);
    const SpectralField u = random_field(8, 0.0, 2.0, rng);
    const int m = 64;
    double mean = 0.0;
    for (int j = 0; j < m; ++j) {
        const double x = 2.0 * std::numbers::pi * j / m;
        double up = 0.0;
        for (int k = 1; k <= 8; ++k)
            up += -u.cos_coeff(k) * k * std::sin(k * x) + u.sin_coeff(k) * k * std::cos(k * x);
        mean += evaluate(u, x) * up / std::sqrt(std::numbers::pi);
    }
    CHECK(std::abs(mean / m) < 1e-13);
}

TEST_CASE("bilinearity in the first argument") {
    RngStream rng(222);
    const SpectralField u = random_field(16, 0.3, 1.0, rng);
    const SpectralField w = random_field(16, 0.3, 1.0, rng);
    const SpectralField v = random_field(16, 0.3, 1.0, rng);
    const SpectralField lhs = bilinear(2.5 * u - 1.25 * w, v);
    const SpectralField rhs = 2.5 * bilinear(u, v) - 1.25 * bilinear(w, v);
    for (int k = 1; k <= 16; ++k) {
        CHECK(lhs.cos_coeff(k) == doctest::Approx(rhs.cos_coeff(k)).epsilon(1e-12));
        CHECK(lhs.sin_coeff(k) == doctest::Approx(rhs.sin_coeff(k)).epsilon(1e-12));
    }
}

TEST_CASE("cutoff profile: plateau, support, midpoint symmetry, smoothness") {
    CHECK(cutoff_chi(0.0) == 1.0);
    CHECK(cutoff_chi(1.0) == 1.0);
    CHECK(cutoff_chi(-0.7) == 1.0);
    CHECK(cutoff_chi(2.0) == 0.0);
    CHECK(cutoff_chi(5.0) == 0.0);
    CHECK(cutoff_chi(1.5) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1.0;
    for (double r = 1.0; r <= 2.0; r += 0.01) {
        const double c = cutoff_chi(r);
        CHECK(c <= prev + 1e-15);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        prev = c;
    }
    // derivative matches a central difference
    for (double r : {1.1, 1.3, 1.5, 1.9, 0.5, 2.5}) {
        const double eps = 1e-6;
        const double fd = (cutoff_chi(r + eps) - cutoff_chi(r - eps)) / (2.0 * eps);
        CHECK(cutoff_chi_derivative(r) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(cutoff_chi_derivative(1.0) == 0.0);
    CHECK(cutoff_chi_derivative(2.0) == 0.0);
}

TEST_CASE("truncated nonlinearity: plateau, vanishing, and the midpoint value") {
    RngStream rng(333);
    const double r_ball = 0.8;
    SpectralField u = random_field(16, 0.5, 1.0, rng);

    // ||u||_1 = R: chi = 1 region, B_R == B exactly
    u = (r_ball / sobolev_norm(u, 1.0)) * u;
    const SpectralField b = bilinear(u, u);
    const SpectralField br = truncated_nonlinearity(u, r_ball);
    for (int k = 1; k <= 16; ++k) CHECK(br.cos_coeff(k) == b.cos_coeff(k));

    // ||u||_1 = 20R: chi = 0
    const SpectralField big = (20.0 * r_ball / sobolev_norm(u, 1.0)) * u;
    const SpectralField bz = truncated_nonlinearity(big, r_ball);
    CHECK(sobolev_norm(bz, 0.0) == 0.0);

    // ||u||_1 = 7.5R: argument 1.5, scale exactly 1/2
    const SpectralField mid = (7.5 * r_ball / sobolev_norm(u, 1.0)) * u;
    const SpectralField bm = truncated_nonlinearity(mid, r_ball);
    const SpectralField bfull = bilinear(mid, mid);
    for (int k = 1; k <= 16; ++k)
        CHECK(bm.sin_coeff(k) == doctest::Approx(0.5 * bfull.sin_coeff(k)).epsilon(1e-13));
}

TEST_CASE("truncated nonlinearity is globally bounded with an R^2 scale") {
    RngStream rng(444);
    std::vector<double> ratios;
    for (double r_ball : {0.5, 1.0, 2.0, 4.0}) {
        double sup = 0.0;
        for (int rep = 0; rep < 300; ++rep) {
            const double h1 = rng.uniform(0.05, 10.0) * r_ball;
            const SpectralField u = random_field(16, rng.uniform(0.0, 1.5), h1, rng, 1.0);
            sup = std::max(sup, sobolev_norm(truncated_nonlinearity(u, r_ball), 0.0));
        }
        ratios.push_back(sup / (r_ball * r_ball));
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi / *lo < 4.0);
}

TEST_CASE("truncated nonlinearity is Lipschitz from H1 to H0: fit then validate") {
    RngStream rng(555);
    const double r_ball = 1.0;
    auto ratio = [&](RngStream& g) {
        const SpectralField u = random_field(16, g.uniform(0.0, 1.0), g.uniform(0.1, 12.0), g, 1.0);
        const SpectralField v = random_field(16, g.uniform(0.0, 1.0), g.uniform(0.1, 12.0), g, 1.0);
        const double den = sobolev_norm(u - v, 1.0);
        if (den < 1e-12) return 0.0;
        return sobolev_norm(truncated_nonlinearity(u, r_ball) - truncated_nonlinearity(v, r_ball),
                            0.0) /
               den;
    };
    double fitted = 0.0;
    for (int i = 0; i < 2000; ++i) fitted = std::max(fitted, ratio(rng));
    CHECK(fitted > 0.0);
    CHECK(std::isfinite(fitted));
    RngStream validate(556);
    for (int i = 0; i < 500; ++i) CHECK(ratio(validate) <= 1.05 * fitted);
}

TEST_CASE("trilinear pairing: zero at zero, empirical constant finite and stable") {
    const SpectralField z(8);
    CHECK(trilinear_pairing(z, z, z) == 0.0);
    const double c1 = fit_trilinear_constant(0.0, -0.75, 0.75, 32, 4000, 1);
    const double c2 = fit_trilinear_constant(0.0, -0.75, 0.75, 32, 4000, 2);
    CHECK(c1 > 0.0);
    CHECK(c1 < 10.0);
    CHECK(c1 / c2 > 0.5);
    CHECK(c1 / c2 < 2.0);
}

TEST_CASE("derivative evaluator matches finite differences of B") {
    RngStream rng(666);
    BilinearEvaluator eval(12);
    const SpectralField u = random_field(12, 0.4, 1.0, rng);
    const SpectralField j = random_field(12, 0.4, 1.0, rng);
    const double eps = 1e-6;
    const SpectralField plus = bilinear(u + eps * j, u + eps * j);
    const SpectralField minus = bilinear(u - eps * j, u - eps * j);
    const SpectralField fd = (1.0 / (2.0 * eps)) * (plus - minus);
    const SpectralField got = eval.derivative(u, j);
    for (int k = 1; k <= 12; ++k)
        CHECK(got.cos_coeff(k) == doctest::Approx(fd.cos_coeff(k)).epsilon(1e-7));
}

TEST_CASE("truncated-nonlinearity derivative matches finite differences") {
    RngStream rng(777);
    const double r_ball = 0.6;
    // one field inside the plateau, one in the transition band
    for (double h1_target : {2.0 * r_ball, 7.0 * r_ball}) {
        const SpectralField u = random_field(12, 0.5, h1_target, rng, 1.0);
        const SpectralField j = random_field(12, 0.5, 1.0, rng);
        const double eps = 1e-6;
        const SpectralField plus = truncated_nonlinearity(u + eps * j, r_ball);
        const SpectralField minus = truncated_nonlinearity(u - eps * j, r_ball);
        const SpectralField fd = (1.0 / (2.0 * eps)) * (plus - minus);
        const SpectralField got = truncated_nonlinearity_derivative(u, j, r_ball);
        for (int k = 1; k <= 12; ++k)
            CHECK(got.cos_coeff(k) == doctest::Approx(fd.cos_coeff(k)).epsilon(2e-5));
    }
}
