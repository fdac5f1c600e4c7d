#include "sburg/nonlinearity.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "sburg/fft.hpp"

namespace sburg {

namespace {
const double kSqrtPi = std::sqrt(std::numbers::pi);

double bump(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
} // namespace

double cutoff_chi(double r) {
    r = std::abs(r);
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double a = bump(2.0 - r);
    const double b = bump(r - 1.0);
    return a / (a + b);
}

double cutoff_chi_derivative(double r) {
    const double sign = r < 0.0 ? -1.0 : 1.0;
    r = std::abs(r);
    if (r <= 1.0 || r >= 2.0) return 0.0;
    const double a = bump(2.0 - r);
    const double b = bump(r - 1.0);
    // chi = a/(a+b), so chi' = (a'b - ab')/(a+b)^2 with a' = -a/(2-r)^2, b' = b/(r-1)^2.
    const double da = -a / ((2.0 - r) * (2.0 - r));
    const double db = b / ((r - 1.0) * (r - 1.0));
    const double denom = a + b;
    return sign * (da * b - a * db) / (denom * denom);
}

BilinearEvaluator::BilinearEvaluator(int n_max)
    : n_max_(n_max), m_(next_pow2(static_cast<std::size_t>(3 * n_max + 1))), ga_(m_), gb_(m_) {
    if (n_max < 1) throw std::invalid_argument("bilinear: n_max must be >= 1");
}

void BilinearEvaluator::synthesize(const SpectralField& f, bool differentiate,
                                   std::vector<std::complex<double>>& grid) {
    std::fill(grid.begin(), grid.end(), std::complex<double>(0.0, 0.0));
    for (int k = 1; k <= n_max_; ++k) {
        double ck = f.cos_coeff(k);
        double sk = f.sin_coeff(k);
        if (differentiate) {
            // d/dx (c cos kx + s sin kx) = (k s) cos kx + (-k c) sin kx
            const double dc = static_cast<double>(k) * sk;
            const double ds = -static_cast<double>(k) * ck;
            ck = dc;
            sk = ds;
        }
        const std::complex<double> v(ck / (2.0 * kSqrtPi), -sk / (2.0 * kSqrtPi));
        grid[static_cast<std::size_t>(k)] = v;
        grid[m_ - static_cast<std::size_t>(k)] = std::conj(v);
    }
    fft_pow2(grid, +1);
}

SpectralField BilinearEvaluator::product_with_derivative(const SpectralField& u,
                                                         const SpectralField& v) {
    if (u.n_max != n_max_ || v.n_max != n_max_)
        throw std::invalid_argument("bilinear: field size mismatch");
    synthesize(u, false, ga_);
    synthesize(v, true, gb_);
    for (std::size_t j = 0; j < m_; ++j)
        ga_[j] = std::complex<double>(ga_[j].real() * gb_[j].real(), 0.0);
    fft_pow2(ga_, -1);
    SpectralField out(n_max_);
    const double scale = 2.0 * kSqrtPi / static_cast<double>(m_);
    for (int k = 1; k <= n_max_; ++k) {
        out.cos_coeff(k) = scale * ga_[static_cast<std::size_t>(k)].real();
        out.sin_coeff(k) = -scale * ga_[static_cast<std::size_t>(k)].imag();
    }
    return out;
}

SpectralField BilinearEvaluator::derivative(const SpectralField& u, const SpectralField& J) {
    return product_with_derivative(J, u) + product_with_derivative(u, J);
}

namespace {
BilinearEvaluator& cached_evaluator(int n_max) {
    thread_local std::map<int, BilinearEvaluator> cache;
    auto it = cache.find(n_max);
    if (it == cache.end()) it = cache.emplace(n_max, BilinearEvaluator(n_max)).first;
    return it->second;
}
} // namespace

SpectralField bilinear(const SpectralField& u, const SpectralField& v) {
    if (u.n_max != v.n_max) throw std::invalid_argument("bilinear: fields must share n_max");
    return cached_evaluator(u.n_max).product_with_derivative(u, v);
}

double trilinear_pairing(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    return inner0(bilinear(u, v), w);
}

SpectralField truncated_nonlinearity(const SpectralField& u, double r_ball) {
    if (r_ball <= 0.0) throw std::invalid_argument("truncated_nonlinearity: R must be > 0");
    const double m = sobolev_norm(u, 1.0) / (5.0 * r_ball);
    if (m >= 2.0) return SpectralField(u.n_max);
    const double chi = cutoff_chi(m);
    SpectralField b = bilinear(u, u);
    return chi * b;
}

SpectralField truncated_nonlinearity_derivative(const SpectralField& u, const SpectralField& J,
                                                double r_ball) {
    if (r_ball <= 0.0) throw std::invalid_argument("truncated_nonlinearity: R must be > 0");
    const double h1 = sobolev_norm(u, 1.0);
    const double m = h1 / (5.0 * r_ball);
    if (m >= 2.0) return SpectralField(u.n_max);
    auto& ev = cached_evaluator(u.n_max);
    SpectralField out = cutoff_chi(m) * ev.derivative(u, J);
    const double dchi = cutoff_chi_derivative(m);
    if (dchi != 0.0 && h1 > 0.0) {
        // <u, J>_1 via the fractional weights
        const SpectralField au = apply_fractional_power(u, 1.0);
        const SpectralField aj = apply_fractional_power(J, 1.0);
        const double inner1 = inner0(au, aj);
        out = out + (dchi * inner1 / (5.0 * r_ball * h1)) * bilinear(u, u);
    }
    return out;
}

double fit_trilinear_constant(double s1, double s2, double s3, int n_max, int n_triples,
                              std::uint64_t seed) {
    RngStream rng(seed);
    BilinearEvaluator ev(n_max);
    const double decays[] = {0.0, 0.5, 1.0, 1.5};
    double sup = 0.0;
    for (int i = 0; i < n_triples; ++i) {
        const double du = decays[static_cast<std::size_t>(rng.next_u64() % 4)];
        const double dv = decays[static_cast<std::size_t>(rng.next_u64() % 4)];
        const double dw = decays[static_cast<std::size_t>(rng.next_u64() % 4)];
        const SpectralField u = random_field(n_max, du, 1.0, rng);
        const SpectralField v = random_field(n_max, dv, 1.0, rng);
        const SpectralField w = random_field(n_max, dw, 1.0, rng);
        const double num = std::abs(inner0(ev.product_with_derivative(u, v), w));
        const double den =
            sobolev_norm(u, s1) * sobolev_norm(v, s2 + 1.0) * sobolev_norm(w, s3);
        if (den > 0.0) sup = std::max(sup, num / den);
    }
    return sup;
}

} // namespace sburg
