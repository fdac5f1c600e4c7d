#include "sburg/spde.hpp"

#include <cmath>
#include <stdexcept>

#include "sburg/errors.hpp"
#include "sburg/parallel.hpp"
#include "sburg/stats.hpp"

namespace sburg {

SpdeStepper::SpdeStepper(const Dynamics& dyn, int n_max, double h)
    : dyn_(dyn), n_max_(n_max), h_(h), eval_(n_max) {
    if (!(h > 0.0)) throw std::invalid_argument("spde stepper: h must be > 0");
    if (dyn_.q.n_max() < n_max) throw std::invalid_argument("spde stepper: intensity too short");
    damp_.resize(static_cast<std::size_t>(n_max_));
    for (int k = 1; k <= n_max_; ++k)
        damp_[static_cast<std::size_t>(k - 1)] =
            std::exp(-static_cast<double>(k) * static_cast<double>(k) * h_);
}

SpectralField SpdeStepper::drift_term(const SpectralField& u) {
    switch (dyn_.drift) {
        case Drift::burgers:
            return eval_.product_with_derivative(u, u);
        case Drift::truncated: {
            const double m = sobolev_norm(u, 1.0) / (5.0 * dyn_.r_truncation);
            if (m >= 2.0) return SpectralField(n_max_);
            return cutoff_chi(m) * eval_.product_with_derivative(u, u);
        }
        case Drift::none:
            return SpectralField(n_max_);
    }
    return SpectralField(n_max_);
}

void SpdeStepper::drift_step(SpectralField& u) {
    if (dyn_.drift == Drift::none) {
        for (int k = 0; k < n_max_; ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            u.c[i] *= damp_[i];
            u.s[i] *= damp_[i];
        }
        return;
    }
    const SpectralField b = drift_term(u);
    for (int k = 0; k < n_max_; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        u.c[i] = damp_[i] * (u.c[i] - h_ * b.c[i]);
        u.s[i] = damp_[i] * (u.s[i] - h_ * b.s[i]);
    }
}

void SpdeStepper::step(SpectralField& u, double ds, std::span<const double> xi) {
    if (xi.size() != static_cast<std::size_t>(2 * n_max_))
        throw std::invalid_argument("spde step: xi size mismatch");
    drift_step(u);
    const double root = std::sqrt(ds);
    for (int k = 0; k < n_max_; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        u.c[i] += dyn_.q.beta[i] * root * xi[i];
        u.s[i] += dyn_.q.beta[i] * root * xi[static_cast<std::size_t>(n_max_) + i];
    }
}

bool SpdeStepper::is_finite(const SpectralField& u) const {
    for (int k = 0; k < n_max_; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        if (!std::isfinite(u.c[i]) || !std::isfinite(u.s[i])) return false;
        if (std::abs(u.c[i]) > dyn_.censor_threshold || std::abs(u.s[i]) > dyn_.censor_threshold)
            return false;
    }
    return true;
}

namespace {

void record_point(TrajectoryRecord& rec, double t, const SpectralField& u, bool states) {
    rec.times.push_back(t);
    rec.norm0.push_back(sobolev_norm(u, 0.0));
    rec.norm1.push_back(sobolev_norm(u, 1.0));
    std::vector<double> lm;
    const int pairs = std::min(4, u.n_max);
    for (int k = 1; k <= pairs; ++k) {
        lm.push_back(u.cos_coeff(k));
        lm.push_back(u.sin_coeff(k));
    }
    rec.low_modes.push_back(std::move(lm));
    if (states) rec.states.push_back(u);
}

void track_exit(TrajectoryRecord& rec, const Dynamics& dyn, double t, const SpectralField& u) {
    if (dyn.exit_radius > 0.0 && !std::isfinite(rec.exit_time) &&
        sobolev_norm(u, 1.0) >= 5.0 * dyn.exit_radius)
        rec.exit_time = t;
}

} // namespace

TrajectoryRecord simulate(const SpectralField& phi, const Dynamics& dyn, const SimSpec& spec,
                          std::uint64_t seed) {
    const int n = phi.n_max;
    SpdeStepper stepper(dyn, n, spec.h);
    StableSubordinatorSampler sampler(dyn.alpha, seed);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(spec.t_end / spec.h));
    std::vector<double> xi(static_cast<std::size_t>(2 * n));

    TrajectoryRecord rec;
    SpectralField u = phi;
    record_point(rec, 0.0, u, spec.record_states);
    track_exit(rec, dyn, 0.0, u);
    for (std::size_t j = 0; j < n_steps; ++j) {
        const double ds = sampler.sample_increment(spec.h);
        for (auto& x : xi) x = sampler.stream().normal();
        stepper.step(u, ds, xi);
        const double t = static_cast<double>(j + 1) * spec.h;
        if (!stepper.is_finite(u)) {
            rec.censored = true;
            rec.censor_time = t;
            break;
        }
        track_exit(rec, dyn, t, u);
        if ((j + 1) % spec.record_stride == 0 || j + 1 == n_steps)
            record_point(rec, t, u, spec.record_states);
    }
    return rec;
}

TrajectoryRecord simulate_on_path(const SpectralField& phi, const Dynamics& dyn,
                                  const NoisePath& path, std::size_t record_stride,
                                  bool record_states) {
    const int n = phi.n_max;
    if (path.n_modes != n) throw std::invalid_argument("simulate_on_path: mode count mismatch");
    const double h = path.times.size() > 1 ? path.times[1] - path.times[0] : 1.0;
    SpdeStepper stepper(dyn, n, h);

    TrajectoryRecord rec;
    SpectralField u = phi;
    record_point(rec, 0.0, u, record_states);
    track_exit(rec, dyn, 0.0, u);
    for (std::size_t j = 0; j < path.n_steps(); ++j) {
        stepper.step(u, path.ds[j], path.gauss[j]);
        const double t = path.times[j + 1];
        if (!stepper.is_finite(u)) {
            rec.censored = true;
            rec.censor_time = t;
            break;
        }
        track_exit(rec, dyn, t, u);
        if ((j + 1) % record_stride == 0 || j + 1 == path.n_steps())
            record_point(rec, t, u, record_states);
    }
    return rec;
}

CoupledRecord simulate_coupled(const SpectralField& phi1, const SpectralField& phi2,
                               const Dynamics& dyn, const SimSpec& spec, std::uint64_t seed) {
    const int n = phi1.n_max;
    if (phi2.n_max != n) throw std::invalid_argument("simulate_coupled: mode count mismatch");
    SpdeStepper stepper(dyn, n, spec.h);
    BilinearEvaluator eval(n);
    StableSubordinatorSampler sampler(dyn.alpha, seed);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(spec.t_end / spec.h));
    std::vector<double> xi(static_cast<std::size_t>(2 * n));
    std::vector<double> damp(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        damp[static_cast<std::size_t>(k - 1)] =
            std::exp(-static_cast<double>(k * k) * spec.h);

    CoupledRecord out;
    SpectralField u1 = phi1, u2 = phi2, d = phi1 - phi2;
    record_point(out.first, 0.0, u1, spec.record_states);
    record_point(out.second, 0.0, u2, spec.record_states);
    out.diff_norm0.push_back(sobolev_norm(d, 0.0));
    out.diff_norm1.push_back(sobolev_norm(d, 1.0));
    for (std::size_t j = 0; j < n_steps; ++j) {
        const double ds = sampler.sample_increment(spec.h);
        for (auto& x : xi) x = sampler.stream().normal();

        // difference recursion first: needs the pre-step states; no noise term
        SpectralField fd(n);
        if (dyn.drift != Drift::none) {
            const SpectralField b1 = eval.product_with_derivative(u1, u1);
            const SpectralField b2 = eval.product_with_derivative(u2, u2);
            if (dyn.drift == Drift::truncated) {
                const double m1 = sobolev_norm(u1, 1.0) / (5.0 * dyn.r_truncation);
                const double m2 = sobolev_norm(u2, 1.0) / (5.0 * dyn.r_truncation);
                fd = cutoff_chi(m2) * b2 - cutoff_chi(m1) * b1;
            } else {
                fd = b2 - b1;
            }
        }
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            d.c[i] = damp[i] * (d.c[i] + spec.h * fd.c[i]);
            d.s[i] = damp[i] * (d.s[i] + spec.h * fd.s[i]);
        }

        stepper.step(u1, ds, xi);
        stepper.step(u2, ds, xi);
        const double t = static_cast<double>(j + 1) * spec.h;
        if (!stepper.is_finite(u1) || !stepper.is_finite(u2)) {
            out.censored = true;
            out.first.censored = out.second.censored = true;
            out.first.censor_time = out.second.censor_time = t;
            break;
        }
        track_exit(out.first, dyn, t, u1);
        track_exit(out.second, dyn, t, u2);
        if ((j + 1) % spec.record_stride == 0 || j + 1 == n_steps) {
            record_point(out.first, t, u1, spec.record_states);
            record_point(out.second, t, u2, spec.record_states);
            out.diff_norm0.push_back(sobolev_norm(d, 0.0));
            out.diff_norm1.push_back(sobolev_norm(d, 1.0));
        }
    }
    return out;
}

Observable make_observable(const std::string& name) {
    Observable obs;
    obs.name = name;
    obs.bound = 1.0;
    if (name == "norm0") {
        obs.fn = [](const SpectralField& u) { return sobolev_norm(u, 0.0); };
    } else if (name == "norm1") {
        obs.fn = [](const SpectralField& u) { return sobolev_norm(u, 1.0); };
    } else if (name.rfind("cos_", 0) == 0 || name.rfind("sin_", 0) == 0) {
        const bool is_cos = name[0] == 'c';
        const int k = std::stoi(name.substr(4));
        if (k < 1) throw std::invalid_argument("observable: wavenumber must be >= 1");
        obs.fn = [is_cos, k](const SpectralField& u) {
            if (k > u.n_max) return 0.0;
            return is_cos ? u.cos_coeff(k) : u.sin_coeff(k);
        };
    } else {
        throw std::invalid_argument("unknown observable: " + name);
    }
    return obs;
}

SemigroupEstimate estimate_semigroup(const SpectralField& phi, const Observable& obs, double t,
                                     std::size_t n_samples, const Dynamics& dyn, double h,
                                     std::uint64_t seed) {
    SimSpec spec;
    spec.h = h;
    spec.t_end = t;
    spec.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(t / h)));
    spec.record_states = true; // only the endpoint survives the stride
    std::vector<double> vals(n_samples);
    std::vector<char> ok(n_samples, 0);
    parallel_for(n_samples, [&](std::size_t i) {
        const TrajectoryRecord rec = simulate(phi, dyn, spec, derive_seed(seed, i));
        if (!rec.censored) {
            vals[i] = obs(rec.states.back());
            ok[i] = 1;
        }
    });
    SemigroupEstimate est;
    est.t = t;
    est.n_samples = n_samples;
    std::vector<double> kept;
    kept.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        if (ok[i]) kept.push_back(vals[i]);
    est.n_censored = n_samples - kept.size();
    const MeanStderr ms = mean_stderr(kept);
    est.value = ms.mean;
    est.stderr_ = ms.stderr_;
    return est;
}

} // namespace sburg
