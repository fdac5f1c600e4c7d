#include "sburg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sburg {

namespace {

double kahan_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

double sorted_quantile(const std::vector<double>& v, double q) {
    if (v.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q <= 0.0) return v.front();
    if (q >= 1.0) return v.back();
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= v.size()) return v.back();
    return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

} // namespace

MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr out;
    out.n = xs.size();
    if (out.n == 0) return out;
    out.mean = kahan_sum(xs) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    double s2 = 0.0, c = 0.0;
    for (double x : xs) {
        const double d = x - out.mean;
        double y = d * d - c;
        double t = s2 + y;
        c = (t - s2) - y;
        s2 = t;
    }
    const double var = s2 / static_cast<double>(out.n - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(out.n));
    return out;
}

double quantile(std::span<const double> xs, double q) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return sorted_quantile(v, q);
}

MedianOfMeans median_of_means(std::span<const double> xs, std::size_t n_blocks) {
    MedianOfMeans out;
    if (xs.empty()) return out;
    n_blocks = std::max<std::size_t>(1, std::min(n_blocks, xs.size()));
    std::vector<double> block_means;
    block_means.reserve(n_blocks);
    const std::size_t per = xs.size() / n_blocks;
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const std::size_t lo = b * per;
        const std::size_t hi = (b + 1 == n_blocks) ? xs.size() : lo + per;
        block_means.push_back(mean_stderr(xs.subspan(lo, hi - lo)).mean);
    }
    std::sort(block_means.begin(), block_means.end());
    out.n_blocks = n_blocks;
    out.estimate = sorted_quantile(block_means, 0.5);
    if (n_blocks >= 4) {
        const double iqr = sorted_quantile(block_means, 0.75) - sorted_quantile(block_means, 0.25);
        // sigma ~ IQR/1.349; stderr of a median ~ 1.2533 sigma/sqrt(k)
        out.stderr_ = 1.2533 * (iqr / 1.349) / std::sqrt(static_cast<double>(n_blocks));
    } else {
        out.stderr_ = mean_stderr(std::span<const double>(block_means)).stderr_;
    }
    return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
    // c(alpha) = sqrt(-ln(alpha/2)/2)
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit f;
    f.n = std::min(x.size(), y.size());
    if (f.n < 2) throw std::invalid_argument("fit_line needs at least 2 points");
    const double n = static_cast<double>(f.n);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < f.n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (f.n > 2) {
        double sse = 0.0;
        for (std::size_t i = 0; i < f.n; ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            sse += r * r;
        }
        f.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    }
    return f;
}

double hill_tail_index(std::span<const double> xs, std::size_t k) {
    std::vector<double> v;
    v.reserve(xs.size());
    for (double x : xs) v.push_back(std::abs(x));
    std::sort(v.begin(), v.end(), std::greater<double>());
    if (k + 1 > v.size() || k < 1) throw std::invalid_argument("hill: bad k");
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += std::log(v[i] / v[k]);
    return static_cast<double>(k) / s;
}

} // namespace sburg
