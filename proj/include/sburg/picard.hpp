#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sburg/nonlinearity.hpp"
#include "sburg/spectral.hpp"

namespace sburg {

// A path of fields on a time grid, normed by
//   ||w||_MT = sup_t ( ||w_t||_0  v  t^{1/2} ||w_t||_1 ).
struct MTNormedPath {
    std::vector<double> grid;          // t_0 = 0 <= ... <= T
    std::vector<SpectralField> values; // one per grid point
    double m_norm = 0.0;               // cached; recompute() refreshes it

    double recompute();
};

double mt_distance(const MTNormedPath& a, const MTNormedPath& b);

// Local existence data for a ball radius R: the horizon on which the mild
// map is a contraction,
//   T(R) = (C R)^{-2/(1-sigma)} ^ 1 ^ 1/(2 C R),
// and the smaller horizon on which the H1 bound ||w_t||_1 <= 3R holds,
//   T_h1(R) = (2 C R)^{-2/(1-sigma)} ^ T(R),
// where C is the fitted trilinear constant. T(R) increases as R decreases.
struct LocalTime {
    double r_ball = 0.0;
    double sigma = 0.0;
    double trilinear_c = 0.0;
    double horizon = 0.0;
    double h1_horizon = 0.0;
};

// Fixed exponent used for every ball/contraction estimate.
inline constexpr double kSigma = 0.75;

// Fitted trilinear constant at the (0, -sigma, sigma) exponent triple for a
// given resolution. Deterministic (fixed internal seed); cached per n_max.
double default_trilinear_constant(int n_max);

LocalTime compute_local_time(double r_ball, double sigma, double trilinear_c);

// Mild-form solver for  w_t = e^{-tA} phi - int_0^t e^{-(t-s)A} B(w_s + Z_s) ds
// on a uniform grid, with exponential-Euler quadrature: the integrand is
// frozen at the left endpoint of each step and the semigroup factor is exact.
class MildSolver {
  public:
    MildSolver(int n_max, std::vector<double> grid);

    const std::vector<double>& grid() const { return grid_; }
    int n_max() const { return n_max_; }

    // Applies the mild map M(w) once. z must align with the grid.
    MTNormedPath apply_map(const SpectralField& phi, const std::vector<SpectralField>& z,
                           const MTNormedPath& w);

    // Discrete fixed point by forward substitution (one sweep). Equals the
    // limit of the Picard iteration on this grid.
    MTNormedPath solve_forward(const SpectralField& phi, const std::vector<SpectralField>& z);

    // Picard iteration from w^0_t = e^{-tA} phi until successive iterates are
    // closer than tol in the M_T norm. Raises NonContractionError when the
    // iterate distance stops shrinking, BlowUpError on NaN/overflow.
    MTNormedPath picard_solve(const SpectralField& phi, const std::vector<SpectralField>& z,
                              double tol, int max_iter = 200);

    // ||M(w1) - M(w2)||_MT / ||w1 - w2||_MT; 0 for identical inputs.
    double measure_contraction(const SpectralField& phi, const std::vector<SpectralField>& z,
                               const MTNormedPath& w1, const MTNormedPath& w2);

    // ||w(phi1) - w(phi2)||_MT / ||phi1 - phi2||_0; 0 for identical data.
    double lipschitz_in_data(const SpectralField& phi1, const SpectralField& phi2,
                             const std::vector<SpectralField>& z);

    // sup_t ||w_t(phi)||_1 along the grid.
    double h1_persistence(const SpectralField& phi, const std::vector<SpectralField>& z);

  private:
    void step_into(SpectralField& w, const SpectralField& z_here);

    int n_max_;
    std::vector<double> grid_;
    double h_;
    std::vector<double> damp_;   // exp(-k^2 h)
    std::vector<double> weight_; // (1 - exp(-k^2 h)) / k^2
    BilinearEvaluator eval_;
};

std::vector<double> uniform_grid(double horizon, std::size_t n_steps);
std::vector<SpectralField> zero_z_path(std::size_t n_points, int n_max);

// Forward-marches the Z == 0 discrete fixed point without storing the path;
// calls visit(t, w) at every index that is a multiple of stride, and at the
// final time. Used for fine-step runs where a stored path would not fit.
void solve_forward_stream(int n_max, double horizon, std::size_t n_steps,
                          const SpectralField& phi, std::size_t stride,
                          const std::function<void(double, const SpectralField&)>& visit);

// Energy-inequality machinery: constants (C1, C2) such that
//   2 |<B(w+Z), w>_0| <= ||w||_1^2 + C1 ||w||_0^2 ||Z||_1^2 + C2 ||Z||_1^4
// hold on a calibration set (fitted with a 2x margin, then frozen).
struct EnergyConstants {
    double c1 = 0.0;
    double c2 = 0.0;
};

EnergyConstants fit_energy_constants(int n_max, int n_trajectories, std::uint64_t seed);

// Integrates the closed-form envelope
//   ||w_t||_0^2 <= ||phi||_0^2 exp(int_0^t (C1 ||Z||_1^2 - 1))
//                + C2 int_0^t exp(int_s^t (C1 ||Z||_1^2 - 1)) ||Z_s||_1^4 ds
// along a solved trajectory and returns the worst LHS/RHS ratio.
double energy_envelope_worst_ratio(const MTNormedPath& w, const std::vector<SpectralField>& z,
                                   const EnergyConstants& ec);

// Random Z path for calibration/validation: a frozen-Gaussian stochastic
// convolution realization rescaled so that sup_t ||Z_t||_1 == target_sup.
std::vector<SpectralField> random_z_path(const std::vector<double>& grid, int n_max,
                                         double target_sup, std::uint64_t seed);

} // namespace sburg
