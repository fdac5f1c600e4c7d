#include "sburg/noise_path.hpp"

#include <cmath>
#include <stdexcept>

#include "sburg/parallel.hpp"

namespace sburg {

double NoisePath::subordinator_at(std::size_t i) const {
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j) s += ds[j];
    return s;
}

SpectralField NoisePath::increment(std::size_t j) const {
    SpectralField f(n_modes);
    const double root = std::sqrt(ds[j]);
    for (int k = 0; k < n_modes; ++k) {
        f.c[k] = root * gauss[j][static_cast<std::size_t>(k)];
        f.s[k] = root * gauss[j][static_cast<std::size_t>(n_modes + k)];
    }
    return f;
}

SpectralField NoisePath::level_at(std::size_t i) const {
    SpectralField f(n_modes);
    for (std::size_t j = 0; j < i; ++j) {
        const double root = std::sqrt(ds[j]);
        for (int k = 0; k < n_modes; ++k) {
            f.c[k] += root * gauss[j][static_cast<std::size_t>(k)];
            f.s[k] += root * gauss[j][static_cast<std::size_t>(n_modes + k)];
        }
    }
    return f;
}

namespace {
void check_grid(std::span<const double> grid) {
    if (grid.empty()) return;
    if (grid[0] != 0.0) throw std::invalid_argument("noise path: grid must start at 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("noise path: grid must be strictly increasing");
}
} // namespace

NoisePath generate_path(StableSubordinatorSampler& sampler, int n_modes,
                        std::span<const double> grid) {
    check_grid(grid);
    NoisePath p;
    p.n_modes = n_modes;
    p.times.assign(grid.begin(), grid.end());
    const std::size_t m = grid.size() > 0 ? grid.size() - 1 : 0;
    p.ds.resize(m);
    p.gauss.assign(m, std::vector<double>(static_cast<std::size_t>(2 * n_modes)));
    for (std::size_t j = 0; j < m; ++j) {
        p.ds[j] = sampler.sample_increment(grid[j + 1] - grid[j]);
        for (auto& g : p.gauss[j]) g = sampler.stream().normal();
    }
    return p;
}

NoisePath generate_brownian_path(RngStream& rng, int n_modes, std::span<const double> grid) {
    check_grid(grid);
    NoisePath p;
    p.n_modes = n_modes;
    p.times.assign(grid.begin(), grid.end());
    const std::size_t m = grid.size() > 0 ? grid.size() - 1 : 0;
    p.ds.resize(m);
    p.gauss.assign(m, std::vector<double>(static_cast<std::size_t>(2 * n_modes)));
    for (std::size_t j = 0; j < m; ++j) {
        p.ds[j] = grid[j + 1] - grid[j];
        for (auto& g : p.gauss[j]) g = rng.normal();
    }
    return p;
}

NoisePath coarsen_path(const NoisePath& fine, std::size_t factor) {
    if (factor == 0 || fine.n_steps() % factor != 0)
        throw std::invalid_argument("coarsen_path: factor must divide the step count");
    NoisePath p;
    p.n_modes = fine.n_modes;
    const std::size_t m = fine.n_steps() / factor;
    p.times.resize(m + 1);
    p.ds.resize(m);
    p.gauss.assign(m, std::vector<double>(static_cast<std::size_t>(2 * fine.n_modes)));
    for (std::size_t j = 0; j <= m; ++j) p.times[j] = fine.times[j * factor];
    for (std::size_t j = 0; j < m; ++j) {
        double ds_sum = 0.0;
        std::vector<double> dl(static_cast<std::size_t>(2 * fine.n_modes), 0.0);
        for (std::size_t f = 0; f < factor; ++f) {
            const std::size_t jf = j * factor + f;
            ds_sum += fine.ds[jf];
            const double root = std::sqrt(fine.ds[jf]);
            for (std::size_t k = 0; k < dl.size(); ++k) dl[k] += root * fine.gauss[jf][k];
        }
        p.ds[j] = ds_sum;
        const double root = std::sqrt(ds_sum);
        for (std::size_t k = 0; k < dl.size(); ++k)
            p.gauss[j][k] = root > 0.0 ? dl[k] / root : 0.0;
    }
    return p;
}

ConvolutionState step_convolution(const ConvolutionState& state, double h, double ds,
                                  std::span<const double> xi) {
    if (!(h > 0.0)) throw std::invalid_argument("step_convolution: h must be > 0");
    if (ds < 0.0) throw std::invalid_argument("step_convolution: ds must be >= 0");
    const int n = state.z.n_max;
    if (xi.size() != static_cast<std::size_t>(2 * n))
        throw std::invalid_argument("step_convolution: xi size mismatch");
    ConvolutionState out = state;
    const double root = std::sqrt(ds);
    for (int k = 1; k <= n; ++k) {
        const double damp = std::exp(-static_cast<double>(k) * static_cast<double>(k) * h);
        const double b = state.q.beta[static_cast<std::size_t>(k - 1)];
        out.z.cos_coeff(k) = damp * state.z.cos_coeff(k) + b * root * xi[static_cast<std::size_t>(k - 1)];
        out.z.sin_coeff(k) = damp * state.z.sin_coeff(k) + b * root * xi[static_cast<std::size_t>(n + k - 1)];
    }
    out.t = state.t + h;
    return out;
}

SpectralField convolution_recursive(const NoisePath& path, const NoiseIntensity& q,
                                    std::size_t i_target) {
    if (i_target >= path.times.size())
        throw std::invalid_argument("convolution_recursive: index out of range");
    ConvolutionState st(q, path.n_modes);
    for (std::size_t j = 0; j < i_target; ++j)
        st = step_convolution(st, path.times[j + 1] - path.times[j], path.ds[j], path.gauss[j]);
    return st.z;
}

SpectralField convolution_by_parts(const NoisePath& path, const NoiseIntensity& q,
                                   std::size_t i_target, int quad_points) {
    if (i_target >= path.times.size())
        throw std::invalid_argument("convolution_by_parts: index out of range");
    const int n = path.n_modes;
    const double t = path.times[i_target];

    // running path level per mode (prefix sums of increments)
    std::vector<double> lc(static_cast<std::size_t>(n), 0.0);
    std::vector<double> ls(static_cast<std::size_t>(n), 0.0);
    // accumulated integral per mode
    std::vector<double> ic(static_cast<std::size_t>(n), 0.0);
    std::vector<double> is(static_cast<std::size_t>(n), 0.0);

    for (std::size_t j = 0; j < i_target; ++j) {
        const double t0 = path.times[j];
        const double t1 = path.times[j + 1];
        for (int k = 1; k <= n; ++k) {
            const double lam = static_cast<double>(k) * static_cast<double>(k);
            double seg; // int_{t0}^{t1} lam exp(-lam (t - s)) ds
            if (quad_points <= 0) {
                seg = std::exp(-lam * (t - t1)) - std::exp(-lam * (t - t0));
            } else {
                seg = 0.0;
                const double dq = (t1 - t0) / quad_points;
                for (int m = 0; m < quad_points; ++m) {
                    const double sm = t0 + (m + 0.5) * dq;
                    seg += lam * std::exp(-lam * (t - sm)) * dq;
                }
            }
            ic[static_cast<std::size_t>(k - 1)] += seg * lc[static_cast<std::size_t>(k - 1)];
            is[static_cast<std::size_t>(k - 1)] += seg * ls[static_cast<std::size_t>(k - 1)];
        }
        // the jump of step j lands at t1: update the level after the segment
        const double root = std::sqrt(path.ds[j]);
        for (int k = 0; k < n; ++k) {
            lc[static_cast<std::size_t>(k)] += root * path.gauss[j][static_cast<std::size_t>(k)];
            ls[static_cast<std::size_t>(k)] += root * path.gauss[j][static_cast<std::size_t>(n + k)];
        }
    }

    SpectralField z(n);
    for (int k = 1; k <= n; ++k) {
        const double b = q.beta[static_cast<std::size_t>(k - 1)];
        z.cos_coeff(k) = b * (lc[static_cast<std::size_t>(k - 1)] - ic[static_cast<std::size_t>(k - 1)]);
        z.sin_coeff(k) = b * (ls[static_cast<std::size_t>(k - 1)] - is[static_cast<std::size_t>(k - 1)]);
    }
    return z;
}

double convolution_sup_norm(double alpha, const NoiseIntensity& q, double theta, double horizon,
                            std::size_t n_steps, std::uint64_t seed) {
    StableSubordinatorSampler sampler(alpha, seed);
    const int n = q.n_max();
    const double h = horizon / static_cast<double>(n_steps);
    std::vector<double> zc(static_cast<std::size_t>(n), 0.0);
    std::vector<double> zs(static_cast<std::size_t>(n), 0.0);
    std::vector<double> damp(static_cast<std::size_t>(n));
    std::vector<double> wgt(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        damp[static_cast<std::size_t>(k - 1)] = std::exp(-static_cast<double>(k * k) * h);
        wgt[static_cast<std::size_t>(k - 1)] = std::pow(static_cast<double>(k), 2.0 * theta);
    }
    double sup = 0.0;
    for (std::size_t j = 0; j < n_steps; ++j) {
        const double root = std::sqrt(sampler.sample_increment(h));
        double nrm2 = 0.0;
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            zc[i] = damp[i] * zc[i] + q.beta[i] * root * sampler.stream().normal();
            zs[i] = damp[i] * zs[i] + q.beta[i] * root * sampler.stream().normal();
            nrm2 += wgt[i] * (zc[i] * zc[i] + zs[i] * zs[i]);
        }
        sup = std::max(sup, std::sqrt(nrm2));
    }
    return sup;
}

MomentScalingReport verify_convolution_moments(double alpha, const NoiseIntensity& q, double p,
                                               double theta, std::span<const double> horizons,
                                               std::size_t steps_per_horizon,
                                               std::size_t n_paths, double tolerance,
                                               std::uint64_t seed) {
    if (!(p > 0.0) || p >= alpha)
        throw std::invalid_argument("verify_convolution_moments: requires 0 < p < alpha");
    MomentScalingReport rep;
    rep.target_slope = p / alpha;
    rep.tolerance = tolerance;
    std::vector<double> log_t, log_e;
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        const double horizon = horizons[hi];
        std::vector<double> sups(n_paths);
        parallel_for(n_paths, [&](std::size_t i) {
            const std::uint64_t s = derive_seed(seed + 1000 * hi, i);
            sups[i] = std::pow(
                convolution_sup_norm(alpha, q, theta, horizon, steps_per_horizon, s), p);
        });
        const MeanStderr ms = mean_stderr(sups);
        rep.rows.push_back({horizon, ms.mean, ms.stderr_});
        log_t.push_back(std::log(horizon));
        log_e.push_back(std::log(ms.mean));
    }
    const LineFit fit = fit_line(log_t, log_e);
    rep.fitted_slope = fit.slope;
    rep.slope_stderr = fit.slope_stderr;
    rep.pass = std::abs(rep.fitted_slope - rep.target_slope) <= tolerance;
    return rep;
}

} // namespace sburg
