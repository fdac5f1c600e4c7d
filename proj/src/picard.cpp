#include "sburg/picard.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sburg/errors.hpp"
#include "sburg/noise_path.hpp"

namespace sburg {

double MTNormedPath::recompute() {
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double n0 = sobolev_norm(values[i], 0.0);
        const double n1 = sobolev_norm(values[i], 1.0);
        m = std::max(m, std::max(n0, std::sqrt(grid[i]) * n1));
    }
    m_norm = m;
    return m;
}

double mt_distance(const MTNormedPath& a, const MTNormedPath& b) {
    if (a.grid.size() != b.grid.size())
        throw std::invalid_argument("mt_distance: grids differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.grid.size(); ++i) {
        const SpectralField d = a.values[i] - b.values[i];
        const double n0 = sobolev_norm(d, 0.0);
        const double n1 = sobolev_norm(d, 1.0);
        m = std::max(m, std::max(n0, std::sqrt(a.grid[i]) * n1));
    }
    return m;
}

double default_trilinear_constant(int n_max) {
    static std::map<int, double> cache;
    auto it = cache.find(n_max);
    if (it != cache.end()) return it->second;
    const double c = fit_trilinear_constant(0.0, -kSigma, kSigma, n_max, 10000, 0x5b7b65eedULL);
    cache[n_max] = c;
    return c;
}

LocalTime compute_local_time(double r_ball, double sigma, double trilinear_c) {
    if (!(r_ball > 0.0) || !(sigma > 0.5 && sigma < 1.0) || !(trilinear_c > 0.0))
        throw std::invalid_argument("compute_local_time: bad parameters");
    LocalTime lt;
    lt.r_ball = r_ball;
    lt.sigma = sigma;
    lt.trilinear_c = trilinear_c;
    const double expo = -2.0 / (1.0 - sigma);
    const double t1 = std::pow(trilinear_c * r_ball, expo);
    lt.horizon = std::min({t1, 1.0, 1.0 / (2.0 * trilinear_c * r_ball)});
    const double t_h1 = std::pow(2.0 * trilinear_c * r_ball, expo);
    lt.h1_horizon = std::min(t_h1, lt.horizon);
    return lt;
}

MildSolver::MildSolver(int n_max, std::vector<double> grid)
    : n_max_(n_max), grid_(std::move(grid)), eval_(n_max) {
    if (grid_.size() < 2) throw std::invalid_argument("mild solver: grid needs >= 2 points");
    if (grid_[0] != 0.0) throw std::invalid_argument("mild solver: grid must start at 0");
    h_ = grid_[1] - grid_[0];
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (std::abs((grid_[i] - grid_[i - 1]) - h_) > 1e-12 * std::max(1.0, h_))
            throw std::invalid_argument("mild solver: grid must be uniform");
    damp_.resize(static_cast<std::size_t>(n_max_));
    weight_.resize(static_cast<std::size_t>(n_max_));
    for (int k = 1; k <= n_max_; ++k) {
        const double lam = static_cast<double>(k) * static_cast<double>(k);
        damp_[static_cast<std::size_t>(k - 1)] = std::exp(-lam * h_);
        weight_[static_cast<std::size_t>(k - 1)] = (1.0 - damp_[static_cast<std::size_t>(k - 1)]) / lam;
    }
}

void MildSolver::step_into(SpectralField& w, const SpectralField& z_here) {
    // w <- exp(-hA) w - K_h B(w + Z),   K_h = (1 - exp(-lam h))/lam per mode
    const SpectralField b = eval_.product_with_derivative(w + z_here, w + z_here);
    for (int k = 0; k < n_max_; ++k) {
        const std::size_t i = static_cast<std::size_t>(k);
        w.c[i] = damp_[i] * w.c[i] - weight_[i] * b.c[i];
        w.s[i] = damp_[i] * w.s[i] - weight_[i] * b.s[i];
    }
}

MTNormedPath MildSolver::apply_map(const SpectralField& phi, const std::vector<SpectralField>& z,
                                   const MTNormedPath& w) {
    if (z.size() != grid_.size() || w.values.size() != grid_.size())
        throw std::invalid_argument("apply_map: path length mismatch");
    MTNormedPath out;
    out.grid = grid_;
    out.values.reserve(grid_.size());
    out.values.push_back(phi);
    SpectralField integral(n_max_); // I_i = int_0^{t_i} e^{-(t_i-s)A} B(w_s+Z_s) ds
    SpectralField decayed = phi;    // e^{-t_i A} phi
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const SpectralField b = eval_.product_with_derivative(w.values[i - 1] + z[i - 1],
                                                              w.values[i - 1] + z[i - 1]);
        for (int k = 0; k < n_max_; ++k) {
            const std::size_t m = static_cast<std::size_t>(k);
            integral.c[m] = damp_[m] * integral.c[m] + weight_[m] * b.c[m];
            integral.s[m] = damp_[m] * integral.s[m] + weight_[m] * b.s[m];
            decayed.c[m] *= damp_[m];
            decayed.s[m] *= damp_[m];
        }
        out.values.push_back(decayed - integral);
    }
    out.recompute();
    return out;
}

MTNormedPath MildSolver::solve_forward(const SpectralField& phi,
                                       const std::vector<SpectralField>& z) {
    if (z.size() != grid_.size())
        throw std::invalid_argument("solve_forward: z path length mismatch");
    MTNormedPath out;
    out.grid = grid_;
    out.values.reserve(grid_.size());
    SpectralField w = phi;
    out.values.push_back(w);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        step_into(w, z[i - 1]);
        if (!w.finite()) throw BlowUpError("mild solve: state left the finite range", grid_[i - 1]);
        out.values.push_back(w);
    }
    out.recompute();
    return out;
}

MTNormedPath MildSolver::picard_solve(const SpectralField& phi,
                                      const std::vector<SpectralField>& z, double tol,
                                      int max_iter) {
    MTNormedPath w;
    w.grid = grid_;
    w.values.reserve(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i)
        w.values.push_back(apply_semigroup(phi, grid_[i]));
    w.recompute();

    double prev_dist = -1.0;
    int stalls = 0;
    for (int it = 0; it < max_iter; ++it) {
        MTNormedPath next = apply_map(phi, z, w);
        if (!std::isfinite(next.m_norm))
            throw BlowUpError("picard_solve: iterate left the finite range", grid_.back());
        const double dist = mt_distance(next, w);
        if (dist < tol) return next;
        if (prev_dist >= 0.0) {
            const double factor = dist / prev_dist;
            stalls = factor > 0.95 ? stalls + 1 : 0;
            if (stalls >= 2)
                throw NonContractionError(
                    "picard_solve: iterates stopped contracting; horizon too large", factor);
        }
        prev_dist = dist;
        w = std::move(next);
    }
    throw NonContractionError("picard_solve: no convergence within max_iter",
                              prev_dist >= 0.0 ? 1.0 : 0.0);
}

double MildSolver::measure_contraction(const SpectralField& phi,
                                       const std::vector<SpectralField>& z,
                                       const MTNormedPath& w1, const MTNormedPath& w2) {
    const double denom = mt_distance(w1, w2);
    if (denom == 0.0) return 0.0;
    const MTNormedPath m1 = apply_map(phi, z, w1);
    const MTNormedPath m2 = apply_map(phi, z, w2);
    return mt_distance(m1, m2) / denom;
}

double MildSolver::lipschitz_in_data(const SpectralField& phi1, const SpectralField& phi2,
                                     const std::vector<SpectralField>& z) {
    const double denom = sobolev_norm(phi1 - phi2, 0.0);
    if (denom == 0.0) return 0.0;
    const MTNormedPath w1 = solve_forward(phi1, z);
    const MTNormedPath w2 = solve_forward(phi2, z);
    return mt_distance(w1, w2) / denom;
}

double MildSolver::h1_persistence(const SpectralField& phi, const std::vector<SpectralField>& z) {
    const MTNormedPath w = solve_forward(phi, z);
    double sup = 0.0;
    for (const auto& v : w.values) sup = std::max(sup, sobolev_norm(v, 1.0));
    return sup;
}

std::vector<double> uniform_grid(double horizon, std::size_t n_steps) {
    std::vector<double> g(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i)
        g[i] = horizon * static_cast<double>(i) / static_cast<double>(n_steps);
    g[0] = 0.0;
    return g;
}

std::vector<SpectralField> zero_z_path(std::size_t n_points, int n_max) {
    return std::vector<SpectralField>(n_points, SpectralField(n_max));
}

void solve_forward_stream(int n_max, double horizon, std::size_t n_steps,
                          const SpectralField& phi, std::size_t stride,
                          const std::function<void(double, const SpectralField&)>& visit) {
    const double h = horizon / static_cast<double>(n_steps);
    BilinearEvaluator eval(n_max);
    std::vector<double> damp(static_cast<std::size_t>(n_max));
    std::vector<double> weight(static_cast<std::size_t>(n_max));
    for (int k = 1; k <= n_max; ++k) {
        const double lam = static_cast<double>(k) * static_cast<double>(k);
        damp[static_cast<std::size_t>(k - 1)] = std::exp(-lam * h);
        weight[static_cast<std::size_t>(k - 1)] = (1.0 - damp[static_cast<std::size_t>(k - 1)]) / lam;
    }
    SpectralField w = phi;
    for (std::size_t i = 1; i <= n_steps; ++i) {
        const SpectralField b = eval.product_with_derivative(w, w);
        for (int k = 0; k < n_max; ++k) {
            const std::size_t m = static_cast<std::size_t>(k);
            w.c[m] = damp[m] * w.c[m] - weight[m] * b.c[m];
            w.s[m] = damp[m] * w.s[m] - weight[m] * b.s[m];
        }
        if (!w.finite())
            throw BlowUpError("solve_forward_stream: state left the finite range",
                              static_cast<double>(i) * h);
        if (i % stride == 0 || i == n_steps)
            visit(static_cast<double>(i) * h, w);
    }
}

std::vector<SpectralField> random_z_path(const std::vector<double>& grid, int n_max,
                                         double target_sup, std::uint64_t seed) {
    RngStream rng(seed);
    NoisePath bm = generate_brownian_path(rng, n_max, grid);
    const NoiseIntensity q = NoiseIntensity::power_law(1.75, 1.75, 1.0, n_max);
    std::vector<SpectralField> z;
    z.reserve(grid.size());
    ConvolutionState st(q, n_max);
    z.push_back(st.z);
    double sup = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        st = step_convolution(st, grid[j + 1] - grid[j], bm.ds[j], bm.gauss[j]);
        z.push_back(st.z);
        sup = std::max(sup, sobolev_norm(st.z, 1.0));
    }
    if (sup > 0.0 && target_sup > 0.0) {
        const double scale = target_sup / sup;
        for (auto& f : z) f = scale * f;
    }
    return z;
}

EnergyConstants fit_energy_constants(int n_max, int n_trajectories, std::uint64_t seed) {
    RngStream rng(seed);
    const std::vector<double> grid = uniform_grid(2.0, 400);
    MildSolver solver(n_max, grid);
    double worst = 0.0;
    for (int traj = 0; traj < n_trajectories; ++traj) {
        const double phi_norm = rng.uniform(0.1, 3.0);
        const double z_sup = rng.uniform(0.05, 1.5);
        const SpectralField phi = random_field(n_max, 1.0, phi_norm, rng);
        const std::vector<SpectralField> z =
            random_z_path(grid, n_max, z_sup, rng.next_u64());
        const MTNormedPath w = solver.solve_forward(phi, z);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double lhs =
                std::max(0.0, 2.0 * std::abs(trilinear_pairing(w.values[i] + z[i],
                                                               w.values[i] + z[i], w.values[i])) -
                                  std::pow(sobolev_norm(w.values[i], 1.0), 2.0));
            const double z1sq = std::pow(sobolev_norm(z[i], 1.0), 2.0);
            const double x = std::pow(sobolev_norm(w.values[i], 0.0), 2.0) * z1sq;
            const double y = z1sq * z1sq;
            if (x + y > 0.0) worst = std::max(worst, lhs / (x + y));
        }
    }
    // shared constant with a 2x margin on both terms
    return EnergyConstants{2.0 * worst, 2.0 * worst};
}

double energy_envelope_worst_ratio(const MTNormedPath& w, const std::vector<SpectralField>& z,
                                   const EnergyConstants& ec) {
    if (w.values.size() != z.size())
        throw std::invalid_argument("energy envelope: path length mismatch");
    const std::size_t n = w.grid.size();
    const double phi0sq = std::pow(sobolev_norm(w.values[0], 0.0), 2.0);

    // E_t = int_0^t (C1 ||Z||_1^2 - 1) ds and F_t = int_0^t e^{-E_s} ||Z_s||_1^4 ds,
    // both by trapezoid; then RHS_t = e^{E_t} (phi0^2 + C2 F_t).
    std::vector<double> z1sq(n), expo(n);
    for (std::size_t i = 0; i < n; ++i) z1sq[i] = std::pow(sobolev_norm(z[i], 1.0), 2.0);
    expo[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = w.grid[i] - w.grid[i - 1];
        expo[i] = expo[i - 1] +
                  0.5 * dt * ((ec.c1 * z1sq[i - 1] - 1.0) + (ec.c1 * z1sq[i] - 1.0));
    }
    double worst = 0.0;
    double forcing = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = w.grid[i] - w.grid[i - 1];
        forcing += 0.5 * dt * (std::exp(-expo[i - 1]) * z1sq[i - 1] * z1sq[i - 1] +
                               std::exp(-expo[i]) * z1sq[i] * z1sq[i]);
        const double rhs = std::exp(expo[i]) * (phi0sq + ec.c2 * forcing);
        const double lhs = std::pow(sobolev_norm(w.values[i], 0.0), 2.0);
        if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

} // namespace sburg
