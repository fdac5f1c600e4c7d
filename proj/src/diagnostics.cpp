#include "sburg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sburg/parallel.hpp"
#include "sburg/picard.hpp"
#include "sburg/stats.hpp"

namespace sburg {

namespace {

// Deterministic initial-condition shape for the calibration grid.
SpectralField scaled_reference_field(int n_modes, double norm0) {
    SpectralField base = SpectralField::from_trig_sin(n_modes, 1, 0.8) +
                         SpectralField::from_trig_cos(n_modes, 2, 0.6);
    const double n = sobolev_norm(base, 0.0);
    return (norm0 / n) * base;
}

LyapunovCurve lyapunov_curve(const SpectralField& phi, const Dynamics& dyn,
                             const LyapunovConfig& cfg, std::size_t n_paths,
                             std::uint64_t seed) {
    SimSpec spec;
    spec.h = cfg.h;
    spec.t_end = cfg.t_end;
    spec.record_stride = cfg.record_stride;

    std::vector<TrajectoryRecord> recs(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        recs[i] = simulate(phi, dyn, spec, derive_seed(seed, i));
    });

    LyapunovCurve curve;
    curve.phi_norm = sobolev_norm(phi, 0.0);
    curve.n_paths = n_paths;
    std::size_t n_times = 0;
    for (const auto& r : recs)
        if (!r.censored) n_times = std::max(n_times, r.n_points());
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        std::vector<double> vs;
        vs.reserve(n_paths);
        double t = 0.0;
        for (const auto& r : recs) {
            if (r.censored || ti >= r.n_points()) continue;
            t = r.times[ti];
            vs.push_back(1.0 + r.norm0[ti]);
        }
        const MeanStderr ms = mean_stderr(vs);
        curve.times.push_back(t);
        curve.ev.push_back(ms.mean);
        curve.ev_stderr.push_back(ms.stderr_);
    }
    for (const auto& r : recs)
        if (r.censored) ++curve.n_censored;
    return curve;
}

// Decay rate of one curve toward its own plateau: OLS on log(EV - floor).
LineFit fit_decay(const LyapunovCurve& c) {
    const std::size_t n = c.times.size();
    const std::size_t tail_start = n - std::max<std::size_t>(2, n / 4);
    std::vector<double> tail(c.ev.begin() + static_cast<std::ptrdiff_t>(tail_start), c.ev.end());
    const double floor_val = mean_stderr(tail).mean;
    const double y0 = c.ev.front() - floor_val;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < tail_start; ++i) {
        const double y = c.ev[i] - floor_val;
        if (y > std::max(0.05 * y0, 3.0 * c.ev_stderr[i])) {
            xs.push_back(c.times[i]);
            ys.push_back(std::log(y));
        }
    }
    if (xs.size() < 4) throw std::runtime_error("lyapunov: too few points to fit a decay rate");
    return fit_line(xs, ys);
}

} // namespace

LyapunovReport lyapunov_drift(std::vector<double> calibration_norms, const Dynamics& dyn,
                              const LyapunovConfig& cfg, std::uint64_t seed) {
    if (calibration_norms.size() < 2)
        throw std::invalid_argument("lyapunov_drift: need at least two calibration norms");
    std::sort(calibration_norms.begin(), calibration_norms.end());
    if (calibration_norms.back() < 100.0 * calibration_norms.front())
        throw std::invalid_argument("lyapunov_drift: calibration norms must span two decades");

    LyapunovReport rep;
    std::size_t total = 0, censored = 0;
    for (std::size_t j = 0; j < calibration_norms.size(); ++j) {
        const SpectralField phi = scaled_reference_field(cfg.n_modes, calibration_norms[j]);
        rep.calibration.push_back(
            lyapunov_curve(phi, dyn, cfg, cfg.n_paths_calibration, seed + 17 * (j + 1)));
        total += cfg.n_paths_calibration;
        censored += rep.calibration.back().n_censored;
    }

    // rate: the most conservative fitted decay among large calibration curves
    double rate = 0.0, rate_se = 0.0;
    bool first = true;
    for (const auto& c : rep.calibration) {
        if (1.0 + c.phi_norm < 10.0) continue;
        const LineFit f = fit_decay(c);
        const double r = -f.slope;
        if (first || r < rate) {
            rate = r;
            rate_se = f.slope_stderr;
            first = false;
        }
    }
    rep.rate = rate;
    rep.rate_stderr = rate_se;
    rep.rate_positive = rate > 0.0 && rate - 1.96 * rate_se > 0.0;

    // K_V: twice the largest late-time plateau
    double plateau = 0.0;
    for (const auto& c : rep.calibration) {
        const std::size_t n = c.times.size();
        std::vector<double> tail(c.ev.begin() + static_cast<std::ptrdiff_t>(n - n / 4), c.ev.end());
        plateau = std::max(plateau, mean_stderr(tail).mean);
    }
    rep.k_v = 2.0 * plateau;

    // C_V: smallest multiplier that dominates the calibration curves, with margin
    double cv = 1.0;
    for (const auto& c : rep.calibration) {
        const double v0 = 1.0 + c.phi_norm;
        for (std::size_t i = 0; i < c.times.size(); ++i) {
            const double excess = c.ev[i] - rep.k_v;
            if (excess > 0.0) cv = std::max(cv, excess / (std::exp(-rep.rate * c.times[i]) * v0));
        }
    }
    rep.c_v = 1.25 * cv;

    // held-out initial data: random shapes, norms log-uniform in the span
    RngStream rng(derive_seed(seed, 999));
    rep.holdout_ok = true;
    const double lo = std::log(calibration_norms.front());
    const double hi = std::log(calibration_norms.back());
    for (std::size_t j = 0; j < cfg.n_holdout; ++j) {
        const double norm0 = std::exp(rng.uniform(lo, hi));
        SpectralField phi = random_field(cfg.n_modes, 1.0, norm0, rng);
        LyapunovCurve c = lyapunov_curve(phi, dyn, cfg, cfg.n_paths_holdout,
                                         seed + 7919 * (j + 3));
        total += cfg.n_paths_holdout;
        censored += c.n_censored;
        const double v0 = 1.0 + c.phi_norm;
        for (std::size_t i = 0; i < c.times.size(); ++i) {
            const double bound = rep.c_v * std::exp(-rep.rate * c.times[i]) * v0 + rep.k_v;
            if (c.ev[i] > bound + 3.0 * c.ev_stderr[i]) rep.holdout_ok = false;
        }
        rep.holdout.push_back(std::move(c));
    }

    rep.censored_fraction = total > 0 ? static_cast<double>(censored) / static_cast<double>(total)
                                      : 0.0;
    rep.pass = rep.rate_positive && rep.holdout_ok && rep.censored_fraction <= cfg.censor_budget;
    return rep;
}

CouplingReport coupling_contraction(const SpectralField& phi1, const SpectralField& phi2,
                                    double r_ball, const Dynamics& dyn,
                                    const CouplingConfig& cfg, std::uint64_t seed) {
    const int n = phi1.n_max;
    const LocalTime lt = compute_local_time(r_ball, kSigma, default_trilinear_constant(n));
    CouplingReport rep;
    rep.r_ball = r_ball;
    rep.horizon = lt.horizon;
    rep.check_times = {0.1, lt.horizon};
    const double t_end = std::max(0.1, lt.horizon);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / cfg.h));
    const double diff0 = sobolev_norm(phi1 - phi2, 0.0);
    rep.n_paths = cfg.n_paths;

    std::vector<char> in_event(cfg.n_paths, 0), violated(cfg.n_paths, 0);
    std::vector<double> ratios(cfg.n_paths, 0.0);
    parallel_for(cfg.n_paths, [&](std::size_t p) {
        SpdeStepper stepper(dyn, n, cfg.h);
        StableSubordinatorSampler sampler(dyn.alpha, derive_seed(seed, p));
        std::vector<double> xi(static_cast<std::size_t>(2 * n));
        SpectralField u1 = phi1, u2 = phi2;
        ConvolutionState z(dyn.q, n);
        double z_sup = 0.0;
        double worst = 0.0;
        bool bad = false;
        for (std::size_t j = 0; j < n_steps; ++j) {
            const double ds = sampler.sample_increment(cfg.h);
            for (auto& x : xi) x = sampler.stream().normal();
            stepper.step(u1, ds, xi);
            stepper.step(u2, ds, xi);
            z = step_convolution(z, cfg.h, ds, xi);
            if (!stepper.is_finite(u1) || !stepper.is_finite(u2)) {
                bad = true;
                break;
            }
            z_sup = std::max(z_sup, sobolev_norm(z.z, 1.0));
            const double t = static_cast<double>(j + 1) * cfg.h;
            for (double tc : rep.check_times) {
                if (std::abs(t - tc) < 0.5 * cfg.h) {
                    const double lhs = sobolev_norm(u1 - u2, 1.0);
                    const double ratio = diff0 > 0.0 ? lhs * std::sqrt(t) / diff0 : 0.0;
                    worst = std::max(worst, ratio);
                    if (ratio > cfg.ratio_bound) bad = true;
                }
            }
        }
        in_event[p] = z_sup <= r_ball ? 1 : 0;
        violated[p] = bad ? 1 : 0;
        ratios[p] = worst;
    });

    for (std::size_t p = 0; p < cfg.n_paths; ++p) {
        if (!in_event[p]) continue;
        ++rep.n_in_event;
        if (violated[p]) ++rep.n_violations;
        rep.max_ratio = std::max(rep.max_ratio, ratios[p]);
    }
    rep.violation_fraction = rep.n_in_event > 0
        ? static_cast<double>(rep.n_violations) / static_cast<double>(rep.n_in_event)
        : 1.0;
    rep.pass = rep.n_in_event > 0 && rep.violation_fraction <= cfg.max_violation_fraction;
    return rep;
}

namespace {

// observable samples per (time index, observable index); one slab per side
struct EnsembleSlab {
    std::vector<double> data; // [time][obs][path]
    std::size_t n_times = 0, n_obs = 0, n_paths = 0;

    double* at(std::size_t t, std::size_t o) {
        return data.data() + (t * n_obs + o) * n_paths;
    }
    const double* at(std::size_t t, std::size_t o) const {
        return data.data() + (t * n_obs + o) * n_paths;
    }
};

EnsembleSlab sample_ensemble(const SpectralField& phi, const Dynamics& dyn,
                             const std::vector<Observable>& obs, double h, double t_end,
                             std::size_t n_times, std::size_t n_paths, std::uint64_t seed) {
    EnsembleSlab slab;
    slab.n_times = n_times;
    slab.n_obs = obs.size();
    slab.n_paths = n_paths;
    slab.data.assign(n_times * obs.size() * n_paths, 0.0);
    const std::size_t total_steps = static_cast<std::size_t>(std::llround(t_end / h));
    const std::size_t stride = std::max<std::size_t>(1, total_steps / n_times);
    const int n = phi.n_max;

    parallel_for(n_paths, [&](std::size_t p) {
        SpdeStepper stepper(dyn, n, h);
        StableSubordinatorSampler sampler(dyn.alpha, derive_seed(seed, p));
        std::vector<double> xi(static_cast<std::size_t>(2 * n));
        SpectralField u = phi;
        std::size_t ti = 0;
        for (std::size_t j = 0; j < total_steps && ti < n_times; ++j) {
            const double ds = sampler.sample_increment(h);
            for (auto& x : xi) x = sampler.stream().normal();
            stepper.step(u, ds, xi);
            if (!stepper.is_finite(u)) {
                // censored: freeze remaining samples at the clamp bound
                for (; ti < n_times; ++ti)
                    for (std::size_t o = 0; o < obs.size(); ++o)
                        slab.at(ti, o)[p] = obs[o].bound;
                return;
            }
            if ((j + 1) % stride == 0) {
                for (std::size_t o = 0; o < obs.size(); ++o) slab.at(ti, o)[p] = obs[o](u);
                ++ti;
            }
        }
        for (; ti < n_times; ++ti)
            for (std::size_t o = 0; o < obs.size(); ++o) slab.at(ti, o)[p] = obs[o](u);
    });
    return slab;
}

} // namespace

MixingReport mixing_rate(const SpectralField& phi1, const SpectralField& phi2,
                         const Dynamics& dyn, const MixingConfig& cfg, std::uint64_t seed) {
    MixingReport rep;
    rep.observables = cfg.observables;
    std::vector<Observable> obs;
    for (const auto& name : cfg.observables) obs.push_back(make_observable(name));

    const EnsembleSlab a = sample_ensemble(phi1, dyn, obs, cfg.h, cfg.t_end, cfg.n_times,
                                           cfg.n_paths_per_side, seed);
    const EnsembleSlab b = sample_ensemble(phi2, dyn, obs, cfg.h, cfg.t_end, cfg.n_times,
                                           cfg.n_paths_per_side, seed ^ 0x9e3779b97f4a7c15ULL);

    const std::size_t total_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.h));
    const std::size_t stride = std::max<std::size_t>(1, total_steps / cfg.n_times);
    rep.noise_floor = ks_critical_value(cfg.n_paths_per_side, cfg.n_paths_per_side, 0.01);
    for (std::size_t ti = 0; ti < cfg.n_times; ++ti) {
        double d = 0.0;
        for (std::size_t o = 0; o < obs.size(); ++o) {
            const std::span<const double> sa(a.at(ti, o), a.n_paths);
            const std::span<const double> sb(b.at(ti, o), b.n_paths);
            d = std::max(d, ks_statistic(sa, sb));
        }
        rep.times.push_back(static_cast<double>((ti + 1) * stride) * cfg.h);
        rep.distances.push_back(d);
    }

    // fit the exponential decay on the segment above the noise floor
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        if (rep.distances[i] <= 1.5 * rep.noise_floor) break;
        xs.push_back(rep.times[i]);
        ys.push_back(std::log(rep.distances[i]));
    }
    rep.fit_points = xs.size();
    if (xs.size() >= 4) {
        const LineFit f = fit_line(xs, ys);
        rep.gamma_star = -f.slope;
        rep.gamma_stderr = f.slope_stderr;
        rep.pass = rep.gamma_star > 0.0 && rep.gamma_star - 1.96 * rep.gamma_stderr > 0.0;
    }
    return rep;
}

double mixing_null_calibration(const SpectralField& phi, const Dynamics& dyn,
                               const MixingConfig& cfg, std::uint64_t seed) {
    std::vector<Observable> obs;
    for (const auto& name : cfg.observables) obs.push_back(make_observable(name));
    const EnsembleSlab a = sample_ensemble(phi, dyn, obs, cfg.h, cfg.t_end, cfg.n_times,
                                           cfg.n_paths_per_side, seed + 101);
    const EnsembleSlab b = sample_ensemble(phi, dyn, obs, cfg.h, cfg.t_end, cfg.n_times,
                                           cfg.n_paths_per_side, seed + 202);
    const double crit = ks_critical_value(cfg.n_paths_per_side, cfg.n_paths_per_side, 0.01);
    std::size_t below = 0, cells = 0;
    for (std::size_t ti = 0; ti < cfg.n_times; ++ti) {
        for (std::size_t o = 0; o < obs.size(); ++o) {
            const std::span<const double> sa(a.at(ti, o), a.n_paths);
            const std::span<const double> sb(b.at(ti, o), b.n_paths);
            ++cells;
            if (ks_statistic(sa, sb) < crit) ++below;
        }
    }
    return cells > 0 ? static_cast<double>(below) / static_cast<double>(cells) : 0.0;
}

InvariantProfileReport invariant_measure_profile(const SpectralField& phi_a,
                                                 const SpectralField& phi_b, const Dynamics& dyn,
                                                 const InvariantProfileConfig& cfg,
                                                 std::uint64_t seed) {
    InvariantProfileReport rep;
    rep.observables = cfg.observables;
    std::vector<Observable> obs;
    for (const auto& name : cfg.observables) obs.push_back(make_observable(name));
    const int n = phi_a.n_max;

    auto long_run_samples = [&](const SpectralField& phi, std::uint64_t s) {
        SpdeStepper stepper(dyn, n, cfg.h);
        StableSubordinatorSampler sampler(dyn.alpha, s);
        std::vector<double> xi(static_cast<std::size_t>(2 * n));
        SpectralField u = phi;
        const std::size_t total = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.h));
        const std::size_t burn = static_cast<std::size_t>(std::llround(cfg.burn_in / cfg.h));
        std::vector<std::vector<double>> samples(obs.size());
        for (std::size_t j = 0; j < total; ++j) {
            const double ds = sampler.sample_increment(cfg.h);
            for (auto& x : xi) x = sampler.stream().normal();
            stepper.step(u, ds, xi);
            if (!stepper.is_finite(u)) u = phi; // restart after a censored excursion
            if (j > burn && (j % cfg.sample_stride) == 0)
                for (std::size_t o = 0; o < obs.size(); ++o) samples[o].push_back(obs[o](u));
        }
        return samples;
    };

    const auto samples_a = long_run_samples(phi_a, derive_seed(seed, 1));
    const auto samples_b = long_run_samples(phi_b, derive_seed(seed, 2));

    // ensemble law at a large fixed time, started from phi_a
    std::vector<std::vector<double>> ens(obs.size(), std::vector<double>(cfg.n_paths));
    SimSpec spec;
    spec.h = cfg.h;
    spec.t_end = cfg.ensemble_t;
    spec.record_stride = static_cast<std::size_t>(std::llround(cfg.ensemble_t / cfg.h));
    spec.record_states = true;
    std::vector<char> ok(cfg.n_paths, 0);
    parallel_for(cfg.n_paths, [&](std::size_t p) {
        const TrajectoryRecord rec = simulate(phi_a, dyn, spec, derive_seed(seed, 1000 + p));
        if (!rec.censored) {
            for (std::size_t o = 0; o < obs.size(); ++o) ens[o][p] = obs[o](rec.states.back());
            ok[p] = 1;
        }
    });

    rep.pass = true;
    for (std::size_t o = 0; o < obs.size(); ++o) {
        // batch-means stderr for the autocorrelated time average
        const std::size_t n_batches = 20;
        std::vector<double> batch_means;
        const std::size_t per = samples_a[o].size() / n_batches;
        for (std::size_t bb = 0; bb < n_batches; ++bb) {
            std::span<const double> blk(samples_a[o].data() + bb * per, per);
            batch_means.push_back(mean_stderr(blk).mean);
        }
        const MeanStderr tb = mean_stderr(batch_means);
        std::vector<double> kept;
        for (std::size_t p = 0; p < cfg.n_paths; ++p)
            if (ok[p]) kept.push_back(ens[o][p]);
        const MeanStderr eb = mean_stderr(kept);
        rep.time_average.push_back(tb.mean);
        rep.ensemble_average.push_back(eb.mean);
        const double se = std::sqrt(tb.stderr_ * tb.stderr_ + eb.stderr_ * eb.stderr_);
        rep.combined_stderr.push_back(se);
        if (std::abs(tb.mean - eb.mean) > 3.0 * se) rep.pass = false;

        // uniqueness proxy: long-run laws from the two starts, thinned to
        // weaken autocorrelation before the KS comparison
        std::vector<double> thin_a, thin_b;
        for (std::size_t i = 0; i < samples_a[o].size(); i += 4) thin_a.push_back(samples_a[o][i]);
        for (std::size_t i = 0; i < samples_b[o].size(); i += 4) thin_b.push_back(samples_b[o][i]);
        const double ks = ks_statistic(thin_a, thin_b);
        rep.ks_two_starts.push_back(ks);
        rep.ks_critical = ks_critical_value(thin_a.size(), thin_b.size(), 0.01);
        if (ks >= rep.ks_critical) rep.pass = false;
    }
    return rep;
}

} // namespace sburg
