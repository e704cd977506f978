#pragma once

// Closed-form failure-probability predictions: the oscillatory integral for
// the excited amplitude, the large-gap formula, the split-frequency ansatz
// with a Landau-Zener term, and the adiabatic Grover expressions.

#include "nadyn/model.hpp"
#include "nadyn/spectrum.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nadyn {

struct LargeGapParams {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double omega = 0.0; // integral of the gap over [0, 1]
    int m = 1;

    void validate() const;
};

struct SplitParams {
    double rho0 = 0.0;
    double rho1 = 0.0;
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    double A = 0.0;
    double g = 0.0;
    double v = 0.0;
    int m = 1;

    void validate() const;
    LargeGapParams large_gap() const { return {rho0, rho1, omega_minus + omega_plus, m}; }
};

// integral_0^1 (gamma/Delta)(s) exp(-i tau int_s^1 Delta) ds on spline
// interpolants of the trace. Each panel integrates a quadratic amplitude
// against a linear phase in closed form (the phase curvature is folded into
// the amplitude), so accuracy does not degrade as tau grows. Panels are
// doubled until successive results agree to 1e-10; NumericalError otherwise.
std::complex<double> amplitude_integral(const GapTrace& trace, double tau);

// m [(rho0^2 + rho1^2) - 2 rho0 rho1 cos(omega tau)] / tau^2.
double predict_large_gap(const LargeGapParams& p, double tau);

// A exp(-pi g^2 tau / (4 v)).
double landau_zener_amplitude(double A, double g, double v, double tau);

double predict_split(const SplitParams& p, double tau);

// Frequency sqrt(M/N) artanh(sqrt((N-M)/N)) / atan(sqrt((N-M)/M)).
double grover_omega(std::int64_t big_n, std::int64_t big_m);
// Gap sqrt(M/N) / cos((1 - 2s) atan(sqrt((N-M)/M))) under the adaptive schedule.
double grover_gap(std::int64_t big_n, std::int64_t big_m, double s);
// |<phi0|dH/ds|phi1>| = atan(x) sqrt(M/N) / cos((1 - 2s) atan(x)),
// x = sqrt((N-M)/M). Symmetric about s = 1/2.
double grover_gamma(std::int64_t big_n, std::int64_t big_m, double s);
// gamma(0) / Delta(0)^2; Delta(0) = 1.
double grover_rho(std::int64_t big_n, std::int64_t big_m);
// (4 rho^2 / tau^2) sin^2(omega tau / 2).
double predict_grover(std::int64_t big_n, std::int64_t big_m, double tau);
// Large N/M limit of the period 1/omega: pi sqrt(N/M) / (2 ln 2 + ln(N/M)).
double grover_period_asymptote(std::int64_t big_n, std::int64_t big_m);

// Unperturbed endpoint values for barrier models: the per-qubit rho of the
// decoupled model, rho(0) = mu/2 and rho(1) = 1/(2 mu^2), with m = n copies.
// In the symmetric subspace the same leakage appears as a single channel
// with rho scaled by sqrt(n).
LargeGapParams nobarrier_large_gap(double mu, int n);

struct PredictionInputs {
    LargeGapParams large;
    // Present when the trace shows a resolved avoided crossing; A is zero.
    std::optional<SplitParams> split;
};

// Parameter sets for the closed-form predictions of a model. Barrier models
// take rho endpoints from the decoupled model (the barrier sits away from
// both endpoints); cubic and nobarrier models use the trace endpoints with
// m = 1; Grover uses its closed forms. Frequencies always come from the gap.
PredictionInputs prediction_inputs(const ReducedHamiltonian& model, const GapTrace& trace,
                                   const CrossingParams& crossing);

// CSV with columns tau, p_predicted.
void write_prediction_csv(std::ostream& out, std::span<const double> taus,
                          std::span<const double> probs);

} // namespace nadyn
