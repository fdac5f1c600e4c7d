#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sburg {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

// Mean and standard error with compensated (Kahan) summation, so the result
// does not depend on how an ensemble was chunked across workers.
MeanStderr mean_stderr(std::span<const double> xs);

// q-th sample quantile (linear interpolation), q in [0,1]. Copies and sorts.
double quantile(std::span<const double> xs, double q);

// Median of k block means plus a normal-theory standard error from the
// inter-quartile range of the block means. Robust for heavy-tailed samples.
struct MedianOfMeans {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t n_blocks = 0;
};
MedianOfMeans median_of_means(std::span<const double> xs, std::size_t n_blocks);

// Two-sample Kolmogorov-Smirnov statistic sup_x |F1(x) - F2(x)|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample KS critical value at significance level `alpha`
// (e.g. 0.01): c(alpha) * sqrt((n+m)/(n*m)).
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

// Ordinary least squares y = a + b x.
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    std::size_t n = 0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Hill estimator of the tail index from the top `k` order statistics of |x|.
double hill_tail_index(std::span<const double> xs, std::size_t k);

} // namespace sburg
