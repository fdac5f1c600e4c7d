#include "sburg/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sburg/errors.hpp"
#include "sburg/noise_path.hpp"
#include "sburg/parallel.hpp"
#include "sburg/sensitivity.hpp"
#include "sburg/stats.hpp"

namespace sburg {

namespace {

std::string param(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv) {
        os << (first ? "" : ";") << k << "=" << v;
        first = false;
    }
    return os.str();
}

NoiseIntensity default_intensity(const SimConfig& cfg) {
    return NoiseIntensity::power_law(cfg.theta, cfg.theta_prime, cfg.delta, cfg.n_modes);
}

Dynamics dynamics_from_config(const SimConfig& cfg) {
    Dynamics dyn;
    dyn.alpha = cfg.alpha;
    dyn.q = default_intensity(cfg);
    dyn.drift = cfg.truncation_enabled() ? Drift::truncated : Drift::burgers;
    dyn.r_truncation = cfg.truncation_enabled() ? cfg.r_truncation : 1.0;
    dyn.exit_radius = cfg.truncation_enabled() ? cfg.r_truncation : 0.0;
    return dyn;
}

} // namespace

// ---- subordinator batteries -------------------------------------------------

CheckRow laplace_transform_check(double alpha, double eta, std::size_t n_draws,
                                 std::uint64_t seed) {
    StableSubordinatorSampler s(alpha, seed);
    std::vector<double> xs(n_draws);
    for (auto& x : xs) x = std::exp(-eta * s.sample_unit());
    const MeanStderr ms = mean_stderr(xs);
    CheckRow row;
    row.test = "laplace_transform";
    row.parameter = param({{"alpha", alpha}, {"eta", eta}});
    row.estimate = ms.mean;
    row.stderr_ = ms.stderr_;
    row.target = std::exp(-std::pow(eta, alpha / 2.0));
    row.pass = std::abs(row.estimate - row.target) <= 3.0 * row.stderr_;
    return row;
}

CheckRow negative_moment_slope_check(double alpha, double q, const std::vector<double>& t_grid,
                                     std::size_t n_draws, double tol, std::uint64_t seed) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        StableSubordinatorSampler s(alpha, derive_seed(seed, i));
        const MeanStderr ms = estimate_negative_moment(s, q, t_grid[i], n_draws);
        lx.push_back(std::log(t_grid[i]));
        ly.push_back(std::log(ms.mean));
    }
    const LineFit fit = fit_line(lx, ly);
    CheckRow row;
    row.test = "negative_moment_slope";
    row.parameter = param({{"alpha", alpha}, {"q", q}});
    row.estimate = fit.slope;
    row.stderr_ = fit.slope_stderr;
    row.target = -2.0 * q / alpha;
    row.pass = std::abs(fit.slope - row.target) <= tol;
    return row;
}

CheckRow negative_moment_value_check(double alpha, double q, std::size_t n_draws,
                                     std::uint64_t seed) {
    StableSubordinatorSampler s(alpha, seed);
    const MeanStderr ms = estimate_negative_moment(s, q, 1.0, n_draws);
    CheckRow row;
    row.test = "negative_moment_value";
    row.parameter = param({{"alpha", alpha}, {"q", q}, {"t", 1.0}});
    row.estimate = ms.mean;
    row.stderr_ = ms.stderr_;
    row.target = negative_moment_exact(alpha, q, 1.0);
    row.pass = std::abs(row.estimate - row.target) <= 3.0 * row.stderr_;
    return row;
}

CheckRow small_ball_check(double alpha, double r, double t, std::size_t n_draws,
                          std::uint64_t seed) {
    StableSubordinatorSampler s(alpha, seed);
    const double freq = small_ball_probability(s, r, t, n_draws);
    CheckRow row;
    row.test = "small_ball";
    row.parameter = param({{"alpha", alpha}, {"r", r}, {"t", t}});
    row.estimate = freq;
    row.stderr_ = std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / static_cast<double>(n_draws));
    row.target = 0.0; // must be strictly positive
    row.pass = freq > 0.0;
    return row;
}

// ---- deterministic solver batteries ------------------------------------------

namespace {

// Random element of the M_T ball of radius `target`: a semigroup-smoothed
// random field plus a linearly switched-on second component.
MTNormedPath random_mt_path(const std::vector<double>& grid, int n_max, double target,
                            RngStream& rng) {
    const SpectralField psi1 = random_field(n_max, rng.uniform(0.5, 1.5), 1.0, rng);
    const SpectralField psi2 = random_field(n_max, rng.uniform(0.5, 1.5), 1.0, rng);
    const double t_end = grid.back();
    MTNormedPath p;
    p.grid = grid;
    p.values.reserve(grid.size());
    for (double t : grid) {
        const double ramp = t_end > 0.0 ? t / t_end : 0.0;
        p.values.push_back(apply_semigroup(psi1 + ramp * psi2, t));
    }
    p.recompute();
    if (p.m_norm > 0.0) {
        const double scale = target / p.m_norm;
        for (auto& v : p.values) v = scale * v;
        p.recompute();
    }
    return p;
}

} // namespace

PicardBatteryResult run_picard_battery(const PicardBattery& cfg) {
    PicardBatteryResult res;
    res.trilinear_c = default_trilinear_constant(cfg.n_modes);
    const LocalTime lt = compute_local_time(cfg.r_ball, kSigma, res.trilinear_c);
    res.horizon = lt.horizon;
    res.h1_bound = 3.0 * cfg.r_ball;

    const std::vector<double> grid = uniform_grid(lt.horizon, cfg.grid_steps);
    const std::vector<double> grid_h1 = uniform_grid(lt.h1_horizon, cfg.grid_steps);
    MildSolver solver(cfg.n_modes, grid);
    MildSolver solver_h1(cfg.n_modes, grid_h1);
    RngStream rng(cfg.seed);

    for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
        const double zsup = cfg.r_ball * rng.uniform(0.3, 0.95);
        const std::vector<SpectralField> z = random_z_path(grid, cfg.n_modes, zsup, rng.next_u64());

        const SpectralField phi =
            random_field(cfg.n_modes, rng.uniform(0.5, 1.5), cfg.r_ball * rng.uniform(0.2, 1.0), rng);
        const MTNormedPath w1 = random_mt_path(grid, cfg.n_modes, 2.0 * cfg.r_ball * rng.uniform(0.3, 1.0), rng);
        const MTNormedPath w2 = random_mt_path(grid, cfg.n_modes, 2.0 * cfg.r_ball * rng.uniform(0.3, 1.0), rng);
        res.max_contraction =
            std::max(res.max_contraction, solver.measure_contraction(phi, z, w1, w2));

        const SpectralField phi2 =
            random_field(cfg.n_modes, rng.uniform(0.5, 1.5), cfg.r_ball * rng.uniform(0.2, 1.0), rng);
        res.max_lipschitz = std::max(res.max_lipschitz, solver.lipschitz_in_data(phi, phi2, z));

        const std::vector<SpectralField> z_h1 =
            random_z_path(grid_h1, cfg.n_modes, zsup, rng.next_u64());
        const SpectralField phi_h1 =
            random_field(cfg.n_modes, rng.uniform(0.5, 1.5), cfg.r_ball * rng.uniform(0.2, 1.0), rng, 1.0);
        res.max_h1 = std::max(res.max_h1, solver_h1.h1_persistence(phi_h1, z_h1));
    }
    res.contraction_pass = res.max_contraction <= cfg.contraction_bound;
    res.lipschitz_pass = res.max_lipschitz <= cfg.lipschitz_bound;
    res.h1_pass = res.max_h1 <= res.h1_bound;
    return res;
}

EnergyBatteryResult run_energy_battery(int n_modes, int n_calibration, int n_validation,
                                       double h, std::uint64_t seed) {
    EnergyBatteryResult res;
    res.constants = fit_energy_constants(n_modes, n_calibration, seed);

    const std::size_t steps = static_cast<std::size_t>(std::llround(2.0 / h));
    const std::vector<double> grid = uniform_grid(2.0, steps);
    MildSolver solver(n_modes, grid);
    RngStream rng(derive_seed(seed, 7));
    for (int i = 0; i < n_validation; ++i) {
        const SpectralField phi = random_field(n_modes, 1.0, rng.uniform(0.1, 3.0), rng);
        const std::vector<SpectralField> z =
            random_z_path(grid, n_modes, rng.uniform(0.05, 1.5), rng.next_u64());
        const MTNormedPath w = solver.solve_forward(phi, z);
        res.worst_validation_ratio =
            std::max(res.worst_validation_ratio, energy_envelope_worst_ratio(w, z, res.constants));
    }

    // pure-dissipation special case: ||w_t||_0^2 <= ||phi||_0^2 e^{-t}
    res.zero_z_tolerance = 1.0 + 100.0 * h;
    const std::vector<SpectralField> z0 = zero_z_path(grid.size(), n_modes);
    for (int i = 0; i < 10; ++i) {
        const SpectralField phi = random_field(n_modes, 1.0, rng.uniform(0.5, 3.0), rng);
        const MTNormedPath w = solver.solve_forward(phi, z0);
        const double phi0sq = std::pow(sobolev_norm(phi, 0.0), 2.0);
        for (std::size_t j = 1; j < grid.size(); ++j) {
            const double ratio = std::pow(sobolev_norm(w.values[j], 0.0), 2.0) /
                                 (phi0sq * std::exp(-grid[j]));
            res.worst_zero_z_ratio = std::max(res.worst_zero_z_ratio, ratio);
        }
    }
    res.pass = res.worst_validation_ratio <= 1.0 && res.worst_zero_z_ratio <= res.zero_z_tolerance;
    return res;
}

std::vector<GradientRow> run_gradient_battery(const std::vector<int>& mode_counts,
                                              const std::vector<double>& times,
                                              std::size_t n_samples, double h, double alpha,
                                              std::uint64_t seed) {
    std::vector<GradientRow> rows;
    const Observable obs = make_observable("cos_1");
    std::uint64_t salt = 0;
    for (int n : mode_counts) {
        Dynamics dyn;
        dyn.alpha = alpha;
        dyn.q = NoiseIntensity::power_law(1.75, 1.75, 1.0, n);
        dyn.drift = Drift::burgers;

        const SpectralField phi = SpectralField::from_trig_sin(n, 1, 0.2) +
                                  (n >= 2 ? SpectralField::from_trig_cos(n, 2, 0.1)
                                          : SpectralField(n));
        SpectralField dir = SpectralField::from_trig_cos(n, 1, 0.8);
        if (n >= 2) dir = dir + SpectralField::from_trig_sin(n, 2, 0.6);
        dir = (1.0 / sobolev_norm(dir, 0.0)) * dir;

        for (double t : times) {
            ++salt;
            const GradientEstimate bis =
                bismut_gradient(phi, dir, obs, t, n_samples, dyn, h, derive_seed(seed, salt));
            const GradientEstimate fd = finite_difference_gradient(
                phi, dir, obs, t, 1e-3, n_samples, dyn, h, derive_seed(seed, salt + 1000));
            GradientRow row;
            row.n_modes = n;
            row.t = t;
            row.direction = "0.8cos1+0.6sin2";
            row.bismut = bis.estimate;
            row.bismut_se = bis.stderr_;
            row.fd = fd.estimate;
            row.fd_se = fd.stderr_;
            const double tol = 3.0 * std::sqrt(bis.stderr_ * bis.stderr_ + fd.stderr_ * fd.stderr_);
            row.pass = std::abs(row.bismut - row.fd) <= tol;
            rows.push_back(row);
        }
    }
    return rows;
}

// ---- CLI suites ---------------------------------------------------------

SuiteOutput run_simulate(const SimConfig& cfg) {
    SuiteOutput out;
    const Dynamics dyn = dynamics_from_config(cfg);
    SimSpec spec;
    spec.h = cfg.dt;
    spec.t_end = cfg.t_end;
    spec.record_stride = cfg.record_stride;
    const SpectralField phi = parse_initial_field(cfg.initial_field, cfg.n_modes);
    const TrajectoryRecord rec = simulate(phi, dyn, spec, cfg.seed);

    CsvReport csv({"t", "norm0", "norm1", "cos_1", "sin_1", "cos_2", "sin_2", "cos_3", "sin_3",
                   "cos_4", "sin_4"});
    for (std::size_t i = 0; i < rec.n_points(); ++i) {
        csv.begin_row().cell(rec.times[i]).cell(rec.norm0[i]).cell(rec.norm1[i]);
        for (std::size_t m = 0; m < 8; ++m)
            csv.cell(m < rec.low_modes[i].size() ? rec.low_modes[i][m] : 0.0);
    }
    out.files.emplace_back("trajectory.csv", csv.to_string());
    out.checks.push_back({"finite_trajectory", !rec.censored});
    out.pass = !rec.censored;
    out.censor_budget_exceeded = rec.censored;
    return out;
}

SuiteOutput run_ensemble(const SimConfig& cfg) {
    SuiteOutput out;
    const Dynamics dyn = dynamics_from_config(cfg);
    SimSpec spec;
    spec.h = cfg.dt;
    spec.t_end = cfg.t_end;
    spec.record_stride = cfg.record_stride;

    std::vector<Observable> obs;
    for (const auto& name : cfg.observables) obs.push_back(make_observable(name));
    const SpectralField phi = parse_initial_field(cfg.initial_field, cfg.n_modes);

    std::vector<TrajectoryRecord> recs(cfg.ensemble_size);
    parallel_for(cfg.ensemble_size, [&](std::size_t i) {
        recs[i] = simulate(phi, dyn, spec, derive_seed(cfg.seed, i));
    });

    std::size_t n_times = 0;
    for (const auto& r : recs)
        if (!r.censored) n_times = std::max(n_times, r.n_points());

    CsvReport csv({"t", "observable", "mean", "stderr", "q05", "q50", "q95", "n_censored"});
    for (std::size_t ti = 0; ti < n_times; ++ti) {
        double t = 0.0;
        std::int64_t censored_by_t = 0;
        for (const auto& r : recs)
            if (r.censored && (ti >= r.n_points() || r.censor_time <= r.times[std::min(ti, r.n_points() - 1)]))
                ++censored_by_t;
        for (std::size_t o = 0; o < obs.size(); ++o) {
            std::vector<double> vals;
            vals.reserve(recs.size());
            for (const auto& r : recs) {
                if (r.censored || ti >= r.n_points()) continue;
                t = r.times[ti];
                // reconstruct the observable from the recorded summaries
                if (obs[o].name == "norm0") vals.push_back(std::min(r.norm0[ti], obs[o].bound));
                else if (obs[o].name == "norm1") vals.push_back(std::min(r.norm1[ti], obs[o].bound));
                else {
                    const int k = std::stoi(obs[o].name.substr(4));
                    const std::size_t idx = 2 * static_cast<std::size_t>(k - 1) +
                                            (obs[o].name[0] == 's' ? 1 : 0);
                    double v = idx < r.low_modes[ti].size() ? r.low_modes[ti][idx] : 0.0;
                    v = std::clamp(v, -obs[o].bound, obs[o].bound);
                    vals.push_back(v);
                }
            }
            if (vals.empty()) continue;
            const MeanStderr ms = mean_stderr(vals);
            csv.begin_row()
                .cell(t)
                .cell(obs[o].name)
                .cell(ms.mean)
                .cell(ms.stderr_)
                .cell(quantile(vals, 0.05))
                .cell(quantile(vals, 0.50))
                .cell(quantile(vals, 0.95))
                .cell(censored_by_t);
        }
    }
    std::size_t censored = 0;
    for (const auto& r : recs)
        if (r.censored) ++censored;
    const double frac = static_cast<double>(censored) / static_cast<double>(recs.size());

    out.files.emplace_back("ensemble.csv", csv.to_string());
    out.checks.push_back({"censored_fraction_within_budget", frac <= cfg.censor_budget});
    out.censor_budget_exceeded = frac > cfg.censor_budget;
    out.pass = !out.censor_budget_exceeded;
    return out;
}

SuiteOutput run_picard_solve(const SimConfig& cfg) {
    SuiteOutput out;
    const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
    MildSolver solver(cfg.n_modes, uniform_grid(cfg.t_end, steps));
    const SpectralField phi = parse_initial_field(cfg.initial_field, cfg.n_modes);
    const std::vector<SpectralField> z = zero_z_path(steps + 1, cfg.n_modes);
    const MTNormedPath w = solver.picard_solve(phi, z, 1e-10);

    CsvReport csv({"t", "norm0", "norm1", "cos_1", "sin_1", "cos_2", "sin_2", "cos_3", "sin_3",
                   "cos_4", "sin_4"});
    const std::size_t stride = std::max<std::size_t>(1, cfg.record_stride);
    for (std::size_t i = 0; i < w.grid.size(); i += stride) {
        csv.begin_row().cell(w.grid[i]).cell(sobolev_norm(w.values[i], 0.0)).cell(
            sobolev_norm(w.values[i], 1.0));
        for (int k = 1; k <= 4; ++k) {
            csv.cell(k <= cfg.n_modes ? w.values[i].cos_coeff(k) : 0.0);
            csv.cell(k <= cfg.n_modes ? w.values[i].sin_coeff(k) : 0.0);
        }
    }
    out.files.emplace_back("picard.csv", csv.to_string());
    out.checks.push_back({"picard_converged", true});
    out.pass = true;
    return out;
}

SuiteOutput run_verify_subordinator(const SimConfig& cfg) {
    SuiteOutput out;
    std::vector<CheckRow> rows;
    for (double eta : {0.5, 1.0, 2.0, 4.0})
        rows.push_back(laplace_transform_check(cfg.alpha, eta, cfg.ensemble_size,
                                               derive_seed(cfg.seed, static_cast<std::uint64_t>(eta * 100))));
    const std::vector<double> t_grid = {1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
    rows.push_back(negative_moment_slope_check(cfg.alpha, 1.0, t_grid, cfg.ensemble_size, 0.1,
                                               derive_seed(cfg.seed, 11)));
    rows.push_back(negative_moment_value_check(cfg.alpha, 0.5, cfg.ensemble_size,
                                               derive_seed(cfg.seed, 12)));
    rows.push_back(small_ball_check(cfg.alpha, 1.0, 1.0, cfg.ensemble_size,
                                    derive_seed(cfg.seed, 13)));

    CsvReport csv({"test", "parameter", "estimate", "stderr", "target", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        csv.begin_row().cell(r.test).cell(r.parameter).cell(r.estimate).cell(r.stderr_).cell(
            r.target).cell(r.pass);
        out.checks.push_back({r.test + "(" + r.parameter + ")", r.pass});
        all = all && r.pass;
    }
    out.files.emplace_back("subordinator.csv", csv.to_string());
    out.pass = all;
    return out;
}

SuiteOutput run_verify_convolution(const SimConfig& cfg) {
    SuiteOutput out;
    const NoiseIntensity q = default_intensity(cfg);
    const std::vector<double> horizons = {1.0 / 256, 1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16};
    const MomentScalingReport rep = verify_convolution_moments(
        cfg.alpha, q, 1.0, 0.5, horizons, 128, cfg.ensemble_size, 0.15, cfg.seed);

    CsvReport csv({"T", "estimate", "stderr", "fitted_slope", "target_slope", "pass"});
    for (const auto& r : rep.rows)
        csv.begin_row().cell(r.horizon).cell(r.estimate).cell(r.stderr_).cell(rep.fitted_slope)
            .cell(rep.target_slope).cell(rep.pass);
    out.files.emplace_back("convolution.csv", csv.to_string());
    out.checks.push_back({"sup_norm_scaling_slope", rep.pass});
    out.pass = rep.pass;
    return out;
}

SuiteOutput run_verify_picard(const SimConfig& cfg) {
    SuiteOutput out;
    PicardBattery bat;
    bat.n_modes = cfg.n_modes;
    bat.n_pairs = std::max<std::size_t>(20, cfg.ensemble_size / 10);
    bat.seed = cfg.seed;
    const PicardBatteryResult res = run_picard_battery(bat);
    const EnergyBatteryResult en = run_energy_battery(cfg.n_modes, 30, 100, 5e-3,
                                                      derive_seed(cfg.seed, 2));

    CsvReport csv({"check", "parameter", "value", "threshold", "pass"});
    csv.begin_row().cell(std::string("contraction_factor"))
        .cell(param({{"R", bat.r_ball}, {"T", res.horizon}, {"n_pairs", double(bat.n_pairs)}}))
        .cell(res.max_contraction).cell(bat.contraction_bound).cell(res.contraction_pass);
    csv.begin_row().cell(std::string("lipschitz_in_data"))
        .cell(param({{"R", bat.r_ball}, {"T", res.horizon}}))
        .cell(res.max_lipschitz).cell(bat.lipschitz_bound).cell(res.lipschitz_pass);
    csv.begin_row().cell(std::string("h1_persistence"))
        .cell(param({{"R", bat.r_ball}, {"T_h1", res.horizon}}))
        .cell(res.max_h1).cell(res.h1_bound).cell(res.h1_pass);
    csv.begin_row().cell(std::string("energy_envelope"))
        .cell(param({{"C1", en.constants.c1}, {"C2", en.constants.c2}}))
        .cell(en.worst_validation_ratio).cell(1.0).cell(en.worst_validation_ratio <= 1.0);
    csv.begin_row().cell(std::string("energy_pure_dissipation"))
        .cell(param({{"h", 5e-3}}))
        .cell(en.worst_zero_z_ratio).cell(en.zero_z_tolerance)
        .cell(en.worst_zero_z_ratio <= en.zero_z_tolerance);

    out.files.emplace_back("picard_checks.csv", csv.to_string());
    out.checks.push_back({"contraction", res.contraction_pass});
    out.checks.push_back({"lipschitz", res.lipschitz_pass});
    out.checks.push_back({"h1_persistence", res.h1_pass});
    out.checks.push_back({"energy", en.pass});
    out.pass = res.contraction_pass && res.lipschitz_pass && res.h1_pass && en.pass;
    return out;
}

SuiteOutput run_gradient_check(const SimConfig& cfg) {
    SuiteOutput out;
    const std::vector<int> modes = {2, 4};
    const std::vector<double> times = {0.25, 0.5};
    const auto rows =
        run_gradient_battery(modes, times, cfg.ensemble_size, cfg.dt, cfg.alpha, cfg.seed);

    CsvReport csv({"n_modes", "t", "direction", "bismut", "bismut_se", "fd", "fd_se", "pass"});
    bool all = true;
    for (const auto& r : rows) {
        csv.begin_row().cell(static_cast<std::int64_t>(r.n_modes)).cell(r.t).cell(r.direction)
            .cell(r.bismut).cell(r.bismut_se).cell(r.fd).cell(r.fd_se).cell(r.pass);
        out.checks.push_back({"gradient(n=" + std::to_string(r.n_modes) +
                              ",t=" + format_double17(r.t) + ")", r.pass});
        all = all && r.pass;
    }
    out.files.emplace_back("gradient.csv", csv.to_string());
    out.pass = all;
    return out;
}

SuiteOutput run_ergodicity(const SimConfig& cfg) {
    SuiteOutput out;
    Dynamics dyn = dynamics_from_config(cfg);
    dyn.drift = Drift::burgers; // ergodicity diagnostics run the full dynamics

    LyapunovConfig lc;
    lc.n_modes = cfg.n_modes;
    lc.h = cfg.dt;
    lc.t_end = 12.0;
    lc.n_paths_calibration = std::max<std::size_t>(50, cfg.ensemble_size / 4);
    lc.n_paths_holdout = std::max<std::size_t>(25, cfg.ensemble_size / 8);
    lc.record_stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 / cfg.dt)));
    lc.censor_budget = cfg.censor_budget;
    const LyapunovReport lyap = lyapunov_drift({1.0, 10.0, 100.0}, dyn, lc, cfg.seed);

    CsvReport lcsv({"set", "phi_norm", "t", "ev", "ev_stderr"});
    auto emit_curves = [&](const char* tag, const std::vector<LyapunovCurve>& cs) {
        for (const auto& c : cs)
            for (std::size_t i = 0; i < c.times.size(); ++i)
                lcsv.begin_row().cell(std::string(tag)).cell(c.phi_norm).cell(c.times[i])
                    .cell(c.ev[i]).cell(c.ev_stderr[i]);
    };
    emit_curves("calibration", lyap.calibration);
    emit_curves("holdout", lyap.holdout);
    out.files.emplace_back("lyapunov.csv", lcsv.to_string());

    MixingConfig mc;
    mc.h = cfg.dt;
    mc.n_paths_per_side = cfg.ensemble_size;
    const SpectralField phi_zero(cfg.n_modes);
    const SpectralField phi_far = SpectralField::from_trig_sin(cfg.n_modes, 1, 5.0);
    const MixingReport mix = mixing_rate(phi_zero, phi_far, dyn, mc, derive_seed(cfg.seed, 21));
    const double null_frac =
        mixing_null_calibration(phi_zero, dyn, mc, derive_seed(cfg.seed, 22));
    const bool null_pass = null_frac >= 0.96;

    CsvReport mcsv({"t", "distance", "noise_floor", "gamma_star", "gamma_stderr", "pass"});
    for (std::size_t i = 0; i < mix.times.size(); ++i)
        mcsv.begin_row().cell(mix.times[i]).cell(mix.distances[i]).cell(mix.noise_floor)
            .cell(mix.gamma_star).cell(mix.gamma_stderr).cell(mix.pass);
    out.files.emplace_back("mixing.csv", mcsv.to_string());

    InvariantProfileConfig ic;
    ic.h = cfg.dt;
    ic.n_paths = std::max<std::size_t>(100, cfg.ensemble_size / 4);
    const InvariantProfileReport inv =
        invariant_measure_profile(phi_zero, phi_far, dyn, ic, derive_seed(cfg.seed, 23));
    CsvReport icsv({"observable", "time_average", "ensemble_average", "combined_stderr",
                    "ks_two_starts", "ks_critical"});
    for (std::size_t o = 0; o < inv.observables.size(); ++o)
        icsv.begin_row().cell(inv.observables[o]).cell(inv.time_average[o])
            .cell(inv.ensemble_average[o]).cell(inv.combined_stderr[o])
            .cell(inv.ks_two_starts[o]).cell(inv.ks_critical);
    out.files.emplace_back("invariant.csv", icsv.to_string());

    std::ostringstream summary;
    summary << "ergodicity diagnostics summary\n"
            << "==============================\n\n"
            << "drift condition   E V(u_t) <= C_V e^{-rate t} V(phi) + K_V, V = 1 + |u|_0\n"
            << "  fitted: C_V=" << format_double17(lyap.c_v) << " rate=" << format_double17(lyap.rate)
            << " (se " << format_double17(lyap.rate_stderr) << ") K_V=" << format_double17(lyap.k_v)
            << "\n  rate > 0 with CI excluding 0: " << (lyap.rate_positive ? "yes" : "no")
            << "\n  holds on " << lyap.holdout.size() << " held-out initial conditions: "
            << (lyap.holdout_ok ? "yes" : "no")
            << "\n  censored fraction: " << format_double17(lyap.censored_fraction) << "\n\n"
            << "law contraction   max-over-battery KS distance between the laws started\n"
            << "  from phi=0 and phi=5 sin x, fitted decay exp(-gamma t)\n"
            << "  gamma=" << format_double17(mix.gamma_star) << " (se "
            << format_double17(mix.gamma_stderr) << "), fit points: " << mix.fit_points
            << "\n  decay significant: " << (mix.pass ? "yes" : "no")
            << "\n  null calibration (same law both sides): fraction of cells below the 1%\n"
            << "  KS critical value = " << format_double17(null_frac)
            << " (needs >= 0.96): " << (null_pass ? "yes" : "no") << "\n\n"
            << "long-run statistics   time average vs ensemble average of bounded\n"
            << "  observables, and agreement of long-run laws from two starts\n"
            << "  agree within 3 sigma and KS below the 1% critical value: "
            << (inv.pass ? "yes" : "no") << "\n";
    out.files.emplace_back("summary.txt", summary.str());

    out.checks.push_back({"lyapunov_drift", lyap.pass});
    out.checks.push_back({"mixing_decay", mix.pass});
    out.checks.push_back({"mixing_null_calibration", null_pass});
    out.checks.push_back({"invariant_profile", inv.pass});
    out.censor_budget_exceeded = lyap.censored_fraction > lc.censor_budget;
    out.pass = lyap.pass && mix.pass && null_pass && inv.pass && !out.censor_budget_exceeded;
    return out;
}

bool suite_requires_ergodic_regime(const std::string& name) { return name == "ergodicity"; }

SuiteOutput run_suite(const std::string& name, const SimConfig& cfg) {
    if (name == "simulate") return run_simulate(cfg);
    if (name == "ensemble") return run_ensemble(cfg);
    if (name == "picard") return run_picard_solve(cfg);
    if (name == "verify-subordinator") return run_verify_subordinator(cfg);
    if (name == "verify-convolution") return run_verify_convolution(cfg);
    if (name == "verify-picard") return run_verify_picard(cfg);
    if (name == "gradient-check") return run_gradient_check(cfg);
    if (name == "ergodicity") return run_ergodicity(cfg);
    throw ConfigError("unknown subcommand: " + name);
}

RunManifest write_suite_output(const SimConfig& cfg, const std::string& suite_name,
                               const SuiteOutput& out) {
    RunManifest man;
    man.version = kVersion;
    man.config_text = config_to_text(cfg);
    man.suites = out.checks;
    man.suites.push_back({suite_name, out.pass});
    for (const auto& [name, content] : out.files) {
        write_text_file(cfg.output_path + "/" + name, content);
        man.file_digests.emplace_back(name, digest_hex(content));
    }
    write_text_file(cfg.output_path + "/manifest.json", man.to_json());
    return man;
}

} // namespace sburg
