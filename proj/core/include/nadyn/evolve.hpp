#pragma once

// Direct integration of i dpsi/ds = tau H(s) psi and the two-level eigenbasis
// reduction dC0/ds = -m C1 gamma/Delta, dC1/ds = C0 gamma/Delta - i tau Delta C1.

#include "nadyn/model.hpp"
#include "nadyn/spectrum.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace nadyn {

enum class Method {
    // Exact propagator of H at each substep midpoint; second order.
    exponential_midpoint,
    // Fourth-order Magnus expansion on two Gauss points, exact propagator of
    // the Magnus exponent.
    magnus4,
    // Classical fourth-order Runge-Kutta on the state vector. Independent of
    // the exponential machinery; used as an oracle.
    high_order_explicit,
};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
// Global order of accuracy in the step size.
int method_order(Method method);

struct EvolutionConfig {
    double step_tolerance = 1e-8; // phase-aligned norm change on step doubling
    std::int64_t max_steps = std::int64_t{1} << 22;
    std::int64_t initial_steps = 64;
    Method method = Method::magnus4;

    void validate() const;
    friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

using StateVector = Eigen::VectorXcd;

// Lowest eigenvector of H(s), largest-magnitude component positive.
Eigen::VectorXd ground_state(const ReducedHamiltonian& model, double s);

// Fixed-step propagation from s=0 to s=1 with `steps` substeps.
StateVector propagate(const ReducedHamiltonian& model, const StateVector& initial, double tau,
                      std::int64_t steps, Method method);

struct EvolutionResult {
    StateVector state;           // psi(1)
    std::int64_t steps = 0;      // substeps of the accepted run
    double last_change = 0.0;    // phase-aligned ||psi_2N - psi_N||
    double norm_error = 0.0;     // | ||psi(1)|| - 1 |
};

// Starts from ground_state(model, 0) and doubles the substep count until the
// change is below cfg.step_tolerance and the norm is within 1e-10 of one.
EvolutionResult evolve_schrodinger(const ReducedHamiltonian& model, double tau,
                                   const EvolutionConfig& cfg = {});

// 1 - |<phi0(1)|psi>|^2.
double transition_probability(const StateVector& state, const ReducedHamiltonian& model);

// min over phi of ||a - e^{i phi} b||.
double phase_aligned_distance(const StateVector& a, const StateVector& b);

struct SweepResult {
    std::vector<double> taus;
    std::vector<double> probs;
    std::vector<std::int64_t> steps;
    ModelSpec model;
    EvolutionConfig config;
};

// Independent evolutions for every tau (strictly increasing, all positive),
// run in parallel.
SweepResult tau_sweep(const ReducedHamiltonian& model, std::span<const double> taus,
                      const EvolutionConfig& cfg = {}, std::size_t threads = 0);

// CSV with columns tau, p_transition, p_ground.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

struct TwoLevelAmplitudes {
    std::complex<double> c0;
    std::complex<double> c1;
    int m = 1;
    std::int64_t steps = 0;

    double leakage() const { return m * std::norm(c1); }
    double total() const { return std::norm(c0) + leakage(); }
};

// Integrates the two-level equations along cubic-spline interpolants of the
// trace with C0(0) = 1, C1(0) = 0; RK4 with step doubling as in
// evolve_schrodinger.
TwoLevelAmplitudes evolve_two_level(const GapTrace& trace, double tau, int m,
                                    const EvolutionConfig& cfg = {});

} // namespace nadyn
