#include "nadyn/evolve.hpp"

#include "propagator.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/io.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

namespace nadyn {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::exponential_midpoint: return "exponential-midpoint";
    case Method::magnus4: return "magnus4";
    case Method::high_order_explicit: return "high-order-explicit";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "exponential-midpoint") return Method::exponential_midpoint;
    if (name == "magnus4") return Method::magnus4;
    if (name == "high-order-explicit") return Method::high_order_explicit;
    throw ValidationError("unknown integration method '" + std::string(name) + "'");
}

int method_order(Method method) {
    return method == Method::exponential_midpoint ? 2 : 4;
}

void EvolutionConfig::validate() const {
    if (!(step_tolerance > 0.0)) {
        throw ValidationError("step_tolerance must be positive");
    }
    if (max_steps < 2) {
        throw ValidationError("max_steps must be at least 2");
    }
    if (initial_steps < 1 || initial_steps > max_steps) {
        throw ValidationError("initial_steps must lie in [1, max_steps]");
    }
}

Eigen::VectorXd ground_state(const ReducedHamiltonian& model, double s) {
    const Eigen::Index k = std::min<Eigen::Index>(2, model.dim());
    const Eigenpairs pairs = eigensystem_lowest(hamiltonian_at(model, s), k);
    if (k == 2 && !(pairs.values(1) - pairs.values(0) > 0.0)) {
        throw NumericalError("ground_state: degenerate ground state at s=" + std::to_string(s));
    }
    return pairs.vectors.col(0);
}

StateVector propagate(const ReducedHamiltonian& model, const StateVector& initial, double tau,
                      std::int64_t steps, Method method) {
    if (!(tau > 0.0)) {
        throw ValidationError("propagate: tau must be positive");
    }
    return detail::PathPropagator(model, tau).run(initial, steps, method);
}

double phase_aligned_distance(const StateVector& a, const StateVector& b) {
    const std::complex<double> overlap = b.dot(a); // <b|a>
    const double magnitude = std::abs(overlap);
    const std::complex<double> phase =
        magnitude > 0.0 ? overlap / magnitude : std::complex<double>{1.0, 0.0};
    return (a - phase * b).norm();
}

EvolutionResult evolve_schrodinger(const ReducedHamiltonian& model, double tau,
                                   const EvolutionConfig& cfg) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ValidationError("evolve_schrodinger: tau must be positive and finite");
    }
    cfg.validate();
    const detail::PathPropagator propagator(model, tau);
    const StateVector initial = ground_state(model, 0.0).cast<std::complex<double>>();

    std::int64_t steps = cfg.initial_steps;
    if (cfg.method == Method::high_order_explicit) {
        // RK4 is stable for tau h rho(H) below ~2.8.
        steps = std::max<std::int64_t>(
            steps, static_cast<std::int64_t>(std::ceil(propagator.stiffness() / 2.0)));
    }
    StateVector previous = propagator.run(initial, steps, cfg.method);
    double change = 0.0;
    while (true) {
        if (2 * steps > cfg.max_steps) {
            std::ostringstream msg;
            msg << "evolve_schrodinger: no convergence within max_steps=" << cfg.max_steps
                << " (tau=" << tau << ", method=" << to_string(cfg.method)
                << ", last change=" << change << ")";
            throw NumericalError(msg.str());
        }
        steps *= 2;
        StateVector current = propagator.run(initial, steps, cfg.method);
        change = phase_aligned_distance(current, previous);
        const double norm_error = std::abs(current.norm() - 1.0);
        if (change < cfg.step_tolerance && norm_error <= 1e-10) {
            EvolutionResult result;
            result.state = std::move(current);
            result.steps = steps;
            result.last_change = change;
            result.norm_error = norm_error;
            return result;
        }
        previous = std::move(current);
    }
}

double transition_probability(const StateVector& state, const ReducedHamiltonian& model) {
    const Eigen::VectorXd target = ground_state(model, 1.0);
    const double stay = std::norm(target.cast<std::complex<double>>().dot(state));
    return std::clamp(1.0 - stay, 0.0, 1.0);
}

SweepResult tau_sweep(const ReducedHamiltonian& model, std::span<const double> taus,
                      const EvolutionConfig& cfg, std::size_t threads) {
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0)) {
            throw ValidationError("tau_sweep: tau values must be positive");
        }
        if (i > 0 && !(taus[i] > taus[i - 1])) {
            throw ValidationError("tau_sweep: tau values must be strictly increasing");
        }
    }
    cfg.validate();

    SweepResult out;
    out.taus.assign(taus.begin(), taus.end());
    out.probs.assign(taus.size(), 0.0);
    out.steps.assign(taus.size(), 0);
    out.model = model.spec;
    out.config = cfg;
    parallel_for(
        taus.size(),
        [&](std::size_t i) {
            try {
                const EvolutionResult r = evolve_schrodinger(model, taus[i], cfg);
                out.probs[i] = transition_probability(r.state, model);
                out.steps[i] = r.steps;
            } catch (const ValidationError& e) {
                throw ValidationError("tau_sweep: index " + std::to_string(i) + " (tau=" +
                                      io::format_double(taus[i]) + "): " + e.what());
            } catch (const std::exception& e) {
                throw NumericalError("tau_sweep: index " + std::to_string(i) + " (tau=" +
                                     io::format_double(taus[i]) + "): " + e.what());
            }
        },
        threads);
    return out;
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    using io::format_double;
    out << "tau,p_transition,p_ground\n";
    for (std::size_t i = 0; i < sweep.taus.size(); ++i) {
        out << format_double(sweep.taus[i]) << ',' << format_double(sweep.probs[i]) << ','
            << format_double(1.0 - sweep.probs[i]) << '\n';
    }
}

TwoLevelAmplitudes evolve_two_level(const GapTrace& trace, double tau, int m,
                                    const EvolutionConfig& cfg) {
    if (!(tau > 0.0)) {
        throw ValidationError("evolve_two_level: tau must be positive");
    }
    if (m < 1) {
        throw ValidationError("evolve_two_level: degeneracy m must be >= 1");
    }
    cfg.validate();
    const auto s = trace.s_values();
    std::vector<double> delta(trace.size());
    std::vector<double> coupling(trace.size());
    double delta_max = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        delta[i] = trace.points[i].delta;
        coupling[i] = trace.points[i].gamma / trace.points[i].delta;
        delta_max = std::max(delta_max, delta[i]);
    }
    const numeric::CubicSpline gap(s, delta);
    const numeric::CubicSpline q(s, coupling);

    using cplx = std::complex<double>;
    const cplx minus_i_tau{0.0, -tau};
    const double md = static_cast<double>(m);
    const auto rhs = [&](double at, cplx c0, cplx c1) {
        const double qs = q(at);
        return std::pair{-md * c1 * qs, c0 * qs + minus_i_tau * gap(at) * c1};
    };
    const auto run = [&](std::int64_t steps) {
        cplx c0{1.0, 0.0};
        cplx c1{0.0, 0.0};
        const double h = 1.0 / static_cast<double>(steps);
        for (std::int64_t i = 0; i < steps; ++i) {
            const double at = static_cast<double>(i) * h;
            const auto [a0, a1] = rhs(at, c0, c1);
            const auto [b0, b1] = rhs(at + 0.5 * h, c0 + 0.5 * h * a0, c1 + 0.5 * h * a1);
            const auto [d0, d1] = rhs(at + 0.5 * h, c0 + 0.5 * h * b0, c1 + 0.5 * h * b1);
            const auto [e0, e1] = rhs(at + h, c0 + h * d0, c1 + h * d1);
            c0 += h / 6.0 * (a0 + 2.0 * b0 + 2.0 * d0 + e0);
            c1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * d1 + e1);
        }
        return std::pair{c0, c1};
    };

    std::int64_t steps = std::max<std::int64_t>(
        cfg.initial_steps, static_cast<std::int64_t>(std::ceil(tau * delta_max)));
    auto previous = run(steps);
    while (true) {
        if (2 * steps > cfg.max_steps) {
            throw NumericalError("evolve_two_level: no convergence within max_steps");
        }
        steps *= 2;
        const auto current = run(steps);
        const double change = std::hypot(std::abs(current.first - previous.first),
                                         std::abs(current.second - previous.second));
        if (change < cfg.step_tolerance) {
            TwoLevelAmplitudes out;
            out.c0 = current.first;
            out.c1 = current.second;
            out.m = m;
            out.steps = steps;
            return out;
        }
        previous = current;
    }
}

} // namespace nadyn
