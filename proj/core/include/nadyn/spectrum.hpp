#pragma once

// Spectral traces along the Hamiltonian path: gap, transition matrix element
// and the adiabaticity gauge rho = gamma / gap^2, plus avoided-crossing
// descriptors extracted from them.

#include "nadyn/model.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace nadyn {

struct Eigenpairs {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns
};

// The k smallest eigenpairs of a real symmetric matrix. Uses the tridiagonal
// QL path when the matrix is tridiagonal. Eigenvector signs are fixed so the
// largest-magnitude component of each vector is positive.
Eigenpairs eigensystem_lowest(const Eigen::MatrixXd& h, Eigen::Index k);

struct SpectralPoint {
    double s = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double delta = 0.0;   // lambda1 - lambda0
    double gamma = 0.0;   // <phi0| dH/ds |phi1>, signed under the trace gauge
    double rho = 0.0;     // gamma / delta^2
    double d_delta = 0.0; // d(delta)/ds from Hellmann-Feynman
};

struct GapTrace {
    std::vector<SpectralPoint> points;
    std::vector<Eigen::VectorXd> ground;  // phi0(s_i)
    std::vector<Eigen::VectorXd> excited; // phi1(s_i)
    // Successive overlaps <phi_j(s_i)|phi_j(s_{i+1})> all exceed the
    // continuity threshold after refinement.
    bool gauge_continuous = false;

    std::size_t size() const { return points.size(); }
    std::vector<double> s_values() const;
    std::vector<double> deltas() const;
};

struct GapTraceOptions {
    // Minimum |overlap| between neighbouring eigenvectors before the interval
    // is bisected.
    double overlap_threshold = 0.9;
    int max_bisections = 24;
    // Extra points inserted on each side of the discrete gap minimum.
    int minimum_refinement = 32;
    std::size_t threads = 0;
};

// Sampled spectrum at every grid value (plus refinement points). The grid
// must start at 0, end at 1, be strictly increasing and hold >= 64 points.
// Throws NumericalError if the ground state is degenerate anywhere.
GapTrace gap_trace(const ReducedHamiltonian& model, std::span<const double> grid,
                   const GapTraceOptions& options = {});
GapTrace gap_trace(const ReducedHamiltonian& model, std::size_t grid_points,
                   const GapTraceOptions& options = {});

// Single spectral point, eigenvectors in the canonical sign convention.
SpectralPoint spectral_point(const ReducedHamiltonian& model, double s);

enum class CrossingKind {
    monotone, // gap minimum sits at an endpoint: large-gap regime
    shallow,  // interior minimum, but the gap never doubles on both sides of it
    avoided,  // interior minimum with a resolved Landau-Zener core
};

std::string_view to_string(CrossingKind kind);

struct CrossingParams {
    CrossingKind kind = CrossingKind::monotone;
    double s_star = 0.0;
    double g = 0.0;           // minimum gap
    // Asymptotic slope of the Landau-Zener hyperbola
    // delta^2 = g^2 + v^2 (s - s*)^2 fitted to the core (delta <= 2g) on each
    // side; v is the mean of the two. Zero unless avoided.
    double v = 0.0;
    double core_slope_left = 0.0;
    double core_slope_right = 0.0;
    // Signed straight-line slopes on [s* - 6w, s* - 2w] and [s* + 2w, s* + 6w]
    // (zero when the window leaves [0, 1]).
    double slope_left = 0.0;
    double slope_right = 0.0;
    double half_width = 0.0; // w: half-width of the region where delta < 2g
    double omega_minus = 0.0; // integral of delta over [0, s*]
    double omega_plus = 0.0;  // integral of delta over [s*, 1]
    double omega = 0.0;

    bool has_crossing() const { return kind == CrossingKind::avoided; }
};

// Refines the gap minimum with the exact model, estimates g, v and the split
// frequencies. Quadratures run to 1e-10 absolute tolerance.
CrossingParams locate_crossing(const ReducedHamiltonian& model, const GapTrace& trace);

// Gap integral over [a, b] by adaptive quadrature on the exact model.
double gap_integral(const ReducedHamiltonian& model, double a, double b,
                    double abs_tol = 1e-10);

// Closed form sqrt(1 - 2s + (1 + mu) s^2) of the decoupled-qubit gap as it is
// usually quoted; it coincides with the model gap only for mu = 1.
double nobarrier_gap(double s, double mu);
// Gap of a single decoupled qubit (1-s)/2 sigma_x + s mu |1><1|, any mu:
// sqrt((1 - s)^2 + mu^2 s^2).
double decoupled_qubit_gap(double s, double mu);
// Per-qubit transition element mu / (2 gap) of the decoupled model.
double decoupled_qubit_gamma(double s, double mu);

// Signed (rho(0), rho(1)) under the trace gauge.
std::pair<double, double> rho_endpoints(const GapTrace& trace);

// Integral of |gamma| / delta^2 over the trace.
double adiabatic_time_estimate(const GapTrace& trace);

// CSV with columns s, lambda0, lambda1, delta, gamma, rho.
void write_trace_csv(std::ostream& out, const GapTrace& trace);

} // namespace nadyn
