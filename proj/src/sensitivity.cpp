#include "sburg/sensitivity.hpp"

#include <cmath>
#include <stdexcept>

#include "sburg/errors.hpp"
#include "sburg/parallel.hpp"
#include "sburg/stats.hpp"

namespace sburg {

VariationalStepper::VariationalStepper(const Dynamics& dyn, int n_max, double h)
    : dyn_(dyn), n_max_(n_max), h_(h), eval_(n_max) {
    if (!(h > 0.0)) throw std::invalid_argument("variational stepper: h must be > 0");
    damp_.resize(static_cast<std::size_t>(n_max_));
    for (int k = 1; k <= n_max_; ++k)
        damp_[static_cast<std::size_t>(k - 1)] =
            std::exp(-static_cast<double>(k * k) * h_);
}

SpectralField VariationalStepper::drift_derivative(const SpectralField& u,
                                                   const SpectralField& j) {
    switch (dyn_.drift) {
        case Drift::none:
            return SpectralField(n_max_);
        case Drift::burgers: {
            // DF(u)J = -(J u' + u J')
            return -1.0 * eval_.derivative(u, j);
        }
        case Drift::truncated:
            return -1.0 * truncated_nonlinearity_derivative(u, j, dyn_.r_truncation);
    }
    return SpectralField(n_max_);
}

void VariationalStepper::step(VariationalState& st, double ds, std::span<const double> xi) {
    const SpectralField dj = drift_derivative(st.u, st.j);

    // base state: u <- exp(-hA)(u + h F(u)) + Q dL
    SpectralField fu(n_max_);
    if (dyn_.drift == Drift::burgers) {
        fu = -1.0 * eval_.product_with_derivative(st.u, st.u);
    } else if (dyn_.drift == Drift::truncated) {
        fu = -1.0 * truncated_nonlinearity(st.u, dyn_.r_truncation);
    }
    const double root = std::sqrt(ds);
    for (int k = 0; k < n_max_; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        st.u.c[i] = damp_[i] * (st.u.c[i] + h_ * fu.c[i]) +
                    dyn_.q.beta[i] * root * xi[i];
        st.u.s[i] = damp_[i] * (st.u.s[i] + h_ * fu.s[i]) +
                    dyn_.q.beta[i] * root * xi[static_cast<std::size_t>(n_max_) + i];
        st.j.c[i] = damp_[i] * (st.j.c[i] + h_ * dj.c[i]);
        st.j.s[i] = damp_[i] * (st.j.s[i] + h_ * dj.s[i]);
    }
    st.t += h_;
}

namespace {

struct PathSample {
    double value = 0.0; // Phi(u_t) * weight
    bool ok = false;
};

PathSample bismut_path_sample(const SpectralField& phi, const SpectralField& h_dir,
                              const Observable& obs, double t, const Dynamics& dyn, double h,
                              std::uint64_t seed) {
    const int n = phi.n_max;
    VariationalStepper stepper(dyn, n, h);
    StableSubordinatorSampler sampler(dyn.alpha, seed);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(t / h));
    std::vector<double> xi(static_cast<std::size_t>(2 * n));

    VariationalState st{phi, h_dir, 0.0};
    double integral = 0.0;
    double s_total = 0.0;
    for (std::size_t jstep = 0; jstep < n_steps; ++jstep) {
        const double ds = sampler.sample_increment(h);
        for (auto& x : xi) x = sampler.stream().normal();
        // left-point stochastic integral: J before the step, dL of this step
        const double root = std::sqrt(ds);
        double dot = 0.0;
        for (int k = 0; k < n; ++k) {
            const std::size_t i = static_cast<std::size_t>(k);
            const double binv = 1.0 / dyn.q.beta[i];
            dot += binv * st.j.c[i] * root * xi[i];
            dot += binv * st.j.s[i] * root * xi[static_cast<std::size_t>(n) + i];
        }
        integral += dot;
        s_total += ds;
        stepper.step(st, ds, xi);
        if (!st.u.finite() || !st.j.finite()) return {};
    }
    PathSample out;
    out.value = obs(st.u) * (integral / s_total);
    out.ok = std::isfinite(out.value);
    return out;
}

} // namespace

GradientEstimate bismut_gradient(const SpectralField& phi, const SpectralField& h_dir,
                                 const Observable& obs, double t, std::size_t n_samples,
                                 const Dynamics& dyn, double h, std::uint64_t seed,
                                 std::size_t n_blocks) {
    for (int k = 0; k < phi.n_max; ++k)
        if (dyn.q.beta[static_cast<std::size_t>(k)] == 0.0)
            throw SingularIntensityError("bismut_gradient: beta_k == 0 in retained range");

    std::vector<double> vals(n_samples);
    std::vector<char> ok(n_samples, 0);
    parallel_for(n_samples, [&](std::size_t i) {
        const PathSample ps =
            bismut_path_sample(phi, h_dir, obs, t, dyn, h, derive_seed(seed, i));
        vals[i] = ps.value;
        ok[i] = ps.ok ? 1 : 0;
    });
    std::vector<double> kept;
    kept.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        if (ok[i]) kept.push_back(vals[i]);

    GradientEstimate est;
    est.n_samples = n_samples;
    est.n_censored = n_samples - kept.size();
    if (kept.empty()) return est;
    const MedianOfMeans mom = median_of_means(kept, n_blocks);
    est.estimate = mom.estimate;
    est.stderr_ = mom.stderr_;
    const MeanStderr ms = mean_stderr(kept);
    est.plain_mean = ms.mean;
    est.plain_stderr = ms.stderr_;
    if (kept.size() >= 1000) {
        const double tail = hill_tail_index(kept, kept.size() / 100);
        est.heavy_tail_warning = tail < 2.0;
    }
    return est;
}

GradientEstimate finite_difference_gradient(const SpectralField& phi, const SpectralField& h_dir,
                                            const Observable& obs, double t, double eps,
                                            std::size_t n_samples, const Dynamics& dyn, double h,
                                            std::uint64_t seed) {
    SimSpec spec;
    spec.h = h;
    spec.t_end = t;
    spec.record_stride = static_cast<std::size_t>(std::llround(t / h));
    spec.record_states = true;
    const SpectralField up = phi + eps * h_dir;
    const SpectralField dn = phi - eps * h_dir;

    std::vector<double> vals(n_samples);
    std::vector<char> ok(n_samples, 0);
    parallel_for(n_samples, [&](std::size_t i) {
        const std::uint64_t s = derive_seed(seed, i); // shared by both sides
        const TrajectoryRecord rp = simulate(up, dyn, spec, s);
        const TrajectoryRecord rm = simulate(dn, dyn, spec, s);
        if (!rp.censored && !rm.censored) {
            vals[i] = (obs(rp.states.back()) - obs(rm.states.back())) / (2.0 * eps);
            ok[i] = 1;
        }
    });
    std::vector<double> kept;
    kept.reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        if (ok[i]) kept.push_back(vals[i]);

    GradientEstimate est;
    est.n_samples = n_samples;
    est.n_censored = n_samples - kept.size();
    if (kept.empty()) return est;
    const MeanStderr ms = mean_stderr(kept);
    est.estimate = ms.mean;
    est.stderr_ = ms.stderr_;
    est.plain_mean = ms.mean;
    est.plain_stderr = ms.stderr_;
    return est;
}

SpectralField variational_flow_on_path(const SpectralField& phi, const SpectralField& h_dir,
                                       const Dynamics& dyn, const NoisePath& path) {
    const int n = phi.n_max;
    if (path.n_modes != n) throw std::invalid_argument("variational flow: mode count mismatch");
    const double h = path.times.size() > 1 ? path.times[1] - path.times[0] : 1.0;
    VariationalStepper stepper(dyn, n, h);
    VariationalState st{phi, h_dir, 0.0};
    for (std::size_t j = 0; j < path.n_steps(); ++j) {
        stepper.step(st, path.ds[j], path.gauss[j]);
        if (!st.u.finite() || !st.j.finite())
            throw BlowUpError("variational flow: state left the finite range", path.times[j + 1]);
    }
    return st.j;
}

GrowthBoundReport variational_growth_bound(const SpectralField& phi, const SpectralField& h_dir,
                                           double sigma, double theta, double t_end,
                                           std::size_t n_paths, const Dynamics& dyn, double h,
                                           std::uint64_t seed) {
    GrowthBoundReport rep;
    rep.n_paths = n_paths;
    const double h_norm = sobolev_norm(h_dir, sigma);
    if (h_norm == 0.0) return rep; // ratio convention 0 for h = 0
    const int n = phi.n_max;
    std::vector<double> sups(n_paths, 0.0);
    parallel_for(n_paths, [&](std::size_t p) {
        VariationalStepper stepper(dyn, n, h);
        StableSubordinatorSampler sampler(dyn.alpha, derive_seed(seed, p));
        const std::size_t n_steps = static_cast<std::size_t>(std::llround(t_end / h));
        std::vector<double> xi(static_cast<std::size_t>(2 * n));
        VariationalState st{phi, h_dir, 0.0};
        double sup = 0.0;
        for (std::size_t j = 0; j < n_steps; ++j) {
            const double ds = sampler.sample_increment(h);
            for (auto& x : xi) x = sampler.stream().normal();
            stepper.step(st, ds, xi);
            if (!st.u.finite() || !st.j.finite()) break;
            const double weight = std::pow(st.t, 0.5 * (theta - sigma));
            sup = std::max(sup, weight * sobolev_norm(st.j, theta) / h_norm);
        }
        sups[p] = sup;
    });
    for (double s : sups) rep.empirical_constant = std::max(rep.empirical_constant, s);
    if (!sups.empty()) rep.median_constant = quantile(sups, 0.5);
    return rep;
}

} // namespace sburg
