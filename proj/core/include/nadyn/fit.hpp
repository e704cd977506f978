#pragma once

// Least-squares estimation of the Landau-Zener prefactor A (and optionally
// the gap slope v) of the split-frequency ansatz from a tau sweep.

#include "nadyn/evolve.hpp"
#include "nadyn/io.hpp"
#include "nadyn/predict.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nadyn {

struct FitResult {
    double a_hat = 0.0;
    std::optional<double> v_hat;
    double rms_residual = 0.0;
    std::size_t n_points = 0;
    bool converged = false;
    bool at_boundary = false; // A (or v) sits on the search bracket edge
    bool degenerate = false;  // A ~ 0, so v is not identified
    // Gradient of the normalised objective sum(r^2) / sum(P^2) at the optimum.
    double gradient_norm = 0.0;
    // Best normalised objective after each accepted optimizer iteration.
    std::vector<double> objective_history;
};

struct FitOptions {
    double a_lo = 0.0;
    double a_hi = 2.0;
    int a_prescan = 201;
    int v_grid = 61;
    double gradient_tolerance = 1e-6;
};

// Uniform-weight sum of squared residuals against predict_split with A
// free. The sweep needs >= 20 points spanning >= 3 periods of
// omega_minus + omega_plus.
FitResult fit_A(std::span<const double> taus, std::span<const double> probs,
                const SplitParams& p, const FitOptions& options = {});
FitResult fit_A(const SweepResult& sweep, const SplitParams& p, const FitOptions& options = {});

// Joint (A, v) fit with g held fixed: A is profiled out for every v and the
// profile is minimised over log v from a multi-start grid.
FitResult fit_A_v(std::span<const double> taus, std::span<const double> probs,
                  const SplitParams& p, const FitOptions& options = {});
FitResult fit_A_v(const SweepResult& sweep, const SplitParams& p, const FitOptions& options = {});

// Best single-frequency description k * predict_large_gap(p, tau) with the
// scale k free (closed-form least squares). a_hat holds k.
FitResult fit_large_gap_scale(std::span<const double> taus, std::span<const double> probs,
                              const LargeGapParams& p);

double rms(std::span<const double> values);
double rms_residual(std::span<const double> taus, std::span<const double> probs,
                    const SplitParams& p);

// Fit result, the parameter set and tau range as a JSON document.
std::string fit_result_json(const FitResult& fit, const SplitParams& p,
                            std::span<const double> taus, const io::Provenance& provenance);

} // namespace nadyn
