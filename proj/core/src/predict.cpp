#include "nadyn/predict.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/io.hpp"
#include "nadyn/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace nadyn {

namespace {

using cplx = std::complex<double>;

void check_tau(double tau, const char* where) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError(std::string(where) + ": tau must be positive and finite");
    }
}

void check_grover(std::int64_t big_n, std::int64_t big_m, const char* where) {
    if (big_m < 1 || big_m >= big_n) {
        throw ValidationError(std::string(where) + ": need 1 <= M < N");
    }
}

// I_k(z) = integral_0^1 t^k e^{z t} dt for k = 0, 1, 2.
std::array<cplx, 3> moments(cplx z) {
    if (std::abs(z) < 0.5) {
        std::array<cplx, 3> out{};
        cplx power{1.0, 0.0};
        double factorial = 1.0;
        for (int j = 0; j < 24; ++j) {
            for (int k = 0; k < 3; ++k) {
                out[static_cast<std::size_t>(k)] += power / (factorial * (j + k + 1));
            }
            power *= z;
            factorial *= j + 1;
        }
        return out;
    }
    const cplx e = std::exp(z);
    const cplx i0 = (e - 1.0) / z;
    const cplx i1 = (e * (z - 1.0) + 1.0) / (z * z);
    const cplx i2 = (e * (z * z - 2.0 * z + 2.0) - 2.0) / (z * z * z);
    return {i0, i1, i2};
}

cplx filon_sum(const numeric::CubicSpline& coupling, const numeric::CubicSpline& gap,
               double tau, std::size_t panels) {
    const double total = gap.antiderivative(1.0);
    const auto theta = [&](double s) { return gap.antiderivative(s) - total; };
    const double h = 1.0 / static_cast<double>(panels);
    cplx sum{0.0, 0.0};
    double theta_a = theta(0.0);
    for (std::size_t j = 0; j < panels; ++j) {
        const double a = static_cast<double>(j) * h;
        const double b = j + 1 == panels ? 1.0 : a + h;
        const double c = 0.5 * (a + b);
        const double theta_b = theta(b);
        const double bend = theta(c) - 0.5 * (theta_a + theta_b);
        const cplx f0 = coupling(a);
        const cplx fh = coupling(c) * std::exp(cplx{0.0, tau * bend});
        const cplx f1 = coupling(b);
        const cplx c1 = -3.0 * f0 + 4.0 * fh - f1;
        const cplx c2 = 2.0 * f0 - 4.0 * fh + 2.0 * f1;
        const auto mom = moments(cplx{0.0, tau * (theta_b - theta_a)});
        sum += (b - a) * std::exp(cplx{0.0, tau * theta_a}) *
               (f0 * mom[0] + c1 * mom[1] + c2 * mom[2]);
        theta_a = theta_b;
    }
    return sum;
}

} // namespace

void LargeGapParams::validate() const {
    if (!(omega > 0.0)) {
        throw ValidationError("LargeGapParams: omega must be positive");
    }
    if (m < 1) {
        throw ValidationError("LargeGapParams: m must be >= 1");
    }
}

void SplitParams::validate() const {
    if (!(g > 0.0) || !(v > 0.0)) {
        throw ValidationError("SplitParams: g and v must be positive");
    }
    if (!(omega_minus > 0.0) || !(omega_plus > 0.0)) {
        throw ValidationError("SplitParams: omega_minus and omega_plus must be positive");
    }
    if (!std::isfinite(A)) {
        throw ValidationError("SplitParams: A must be finite");
    }
    if (m < 1) {
        throw ValidationError("SplitParams: m must be >= 1");
    }
}

std::complex<double> amplitude_integral(const GapTrace& trace, double tau) {
    check_tau(tau, "amplitude_integral");
    if (trace.size() < 2) {
        throw ValidationError("amplitude_integral: trace needs at least two points");
    }
    std::vector<double> delta(trace.size());
    std::vector<double> coupling(trace.size());
    double delta_max = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        delta[i] = trace.points[i].delta;
        coupling[i] = trace.points[i].gamma / trace.points[i].delta;
        delta_max = std::max(delta_max, delta[i]);
    }
    const auto s = trace.s_values();
    const numeric::CubicSpline gap(s, delta);
    const numeric::CubicSpline q(s, coupling);

    std::size_t panels = std::max<std::size_t>(
        2048, static_cast<std::size_t>(std::ceil(tau * delta_max)));
    cplx previous = filon_sum(q, gap, tau, panels);
    for (int round = 0; round < 8; ++round) {
        panels *= 2;
        const cplx current = filon_sum(q, gap, tau, panels);
        if (std::abs(current - previous) < 1e-10) {
            return current;
        }
        previous = current;
    }
    throw NumericalError("amplitude_integral: panel refinement did not converge at tau=" +
                         io::format_double(tau));
}

double predict_large_gap(const LargeGapParams& p, double tau) {
    check_tau(tau, "predict_large_gap");
    const double t2 = tau * tau;
    return p.m * ((p.rho0 * p.rho0 + p.rho1 * p.rho1) - 2.0 * p.rho0 * p.rho1 * std::cos(p.omega * tau)) /
           t2;
}

double landau_zener_amplitude(double A, double g, double v, double tau) {
    check_tau(tau, "landau_zener_amplitude");
    if (!(g > 0.0) || !(v > 0.0)) {
        throw ValidationError("landau_zener_amplitude: g and v must be positive");
    }
    return A * std::exp(-std::numbers::pi * g * g * tau / (4.0 * v));
}

double predict_split(const SplitParams& p, double tau) {
    check_tau(tau, "predict_split");
    p.validate();
    const double lambda = landau_zener_amplitude(p.A, p.g, p.v, tau);
    const double t2 = tau * tau;
    const double omega = p.omega_minus + p.omega_plus;
    return p.m * (lambda * lambda + (p.rho0 * p.rho0 + p.rho1 * p.rho1) / t2 +
                  2.0 * lambda / tau *
                      (p.rho0 * std::sin(p.omega_minus * tau) +
                       p.rho1 * std::sin(p.omega_plus * tau)) -
                  2.0 * p.rho0 * p.rho1 / t2 * std::cos(omega * tau));
}

double grover_omega(std::int64_t big_n, std::int64_t big_m) {
    check_grover(big_n, big_m, "grover_omega");
    const double n = static_cast<double>(big_n);
    const double m = static_cast<double>(big_m);
    return std::sqrt(m / n) * std::atanh(std::sqrt((n - m) / n)) / std::atan(std::sqrt((n - m) / m));
}

double grover_gap(std::int64_t big_n, std::int64_t big_m, double s) {
    check_grover(big_n, big_m, "grover_gap");
    const double n = static_cast<double>(big_n);
    const double m = static_cast<double>(big_m);
    const double a = std::atan(std::sqrt((n - m) / m));
    return std::sqrt(m / n) / std::cos((1.0 - 2.0 * s) * a);
}

double grover_gamma(std::int64_t big_n, std::int64_t big_m, double s) {
    check_grover(big_n, big_m, "grover_gamma");
    if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError("grover_gamma: s must lie in [0, 1]");
    }
    const double n = static_cast<double>(big_n);
    const double m = static_cast<double>(big_m);
    const double a = std::atan(std::sqrt((n - m) / m));
    return a * std::sqrt(m / n) / std::cos((1.0 - 2.0 * s) * a);
}

double grover_rho(std::int64_t big_n, std::int64_t big_m) {
    return grover_gamma(big_n, big_m, 0.0);
}

double predict_grover(std::int64_t big_n, std::int64_t big_m, double tau) {
    check_tau(tau, "predict_grover");
    const double rho = grover_rho(big_n, big_m);
    const double sine = std::sin(0.5 * grover_omega(big_n, big_m) * tau);
    return 4.0 * rho * rho / (tau * tau) * sine * sine;
}

double grover_period_asymptote(std::int64_t big_n, std::int64_t big_m) {
    check_grover(big_n, big_m, "grover_period_asymptote");
    const double ratio = static_cast<double>(big_n) / static_cast<double>(big_m);
    return std::numbers::pi * std::sqrt(ratio) / (2.0 * std::numbers::ln2 + std::log(ratio));
}

LargeGapParams nobarrier_large_gap(double mu, int n) {
    if (!(mu > 0.0) || n < 1) {
        throw ValidationError("nobarrier_large_gap: need mu > 0 and n >= 1");
    }
    LargeGapParams p;
    p.rho0 = 0.5 * mu;
    p.rho1 = 0.5 / (mu * mu);
    p.omega = numeric::integrate([mu](double s) { return decoupled_qubit_gap(s, mu); }, 0.0, 1.0,
                                 1e-13);
    p.m = n;
    return p;
}

PredictionInputs prediction_inputs(const ReducedHamiltonian& model, const GapTrace& trace,
                                   const CrossingParams& crossing) {
    const ModelSpec& spec = model.spec;
    PredictionInputs out;
    switch (spec.kind) {
    case ModelKind::grover: {
        const double rho = grover_rho(spec.big_n, spec.big_m);
        out.large = {rho, rho, crossing.omega, 1};
        return out;
    }
    case ModelKind::barrier:
        out.large = nobarrier_large_gap(spec.mu, spec.n);
        out.large.omega = crossing.omega;
        break;
    case ModelKind::cubic:
    case ModelKind::nobarrier: {
        const auto [rho0, rho1] = rho_endpoints(trace);
        out.large = {rho0, rho1, crossing.omega, 1};
        break;
    }
    }
    if (crossing.has_crossing() && spec.kind != ModelKind::nobarrier) {
        SplitParams p;
        p.rho0 = out.large.rho0;
        p.rho1 = out.large.rho1;
        p.omega_minus = crossing.omega_minus;
        p.omega_plus = crossing.omega_plus;
        p.g = crossing.g;
        p.v = crossing.v;
        p.m = out.large.m;
        out.split = p;
    }
    return out;
}

void write_prediction_csv(std::ostream& out, std::span<const double> taus,
                          std::span<const double> probs) {
    if (taus.size() != probs.size()) {
        throw ValidationError("write_prediction_csv: column lengths differ");
    }
    out << "tau,p_predicted\n";
    for (std::size_t i = 0; i < taus.size(); ++i) {
        out << io::format_double(taus[i]) << ',' << io::format_double(probs[i]) << '\n';
    }
}

} // namespace nadyn
