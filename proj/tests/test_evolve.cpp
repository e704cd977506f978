#include "oracles.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/evolve.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace nadyn;

namespace {

ModelSpec qubits(ModelKind kind, int n, double mu = 1.0, double alpha = 0.0, double beta = 0.0) {
    ModelSpec spec;
    spec.kind = kind;
    spec.n = n;
    spec.mu = mu;
    spec.alpha = alpha;
    spec.beta = beta;
    return spec;
}

ModelSpec grover(std::int64_t big_n, std::int64_t big_m) {
    ModelSpec spec;
    spec.kind = ModelKind::grover;
    spec.big_n = big_n;
    spec.big_m = big_m;
    return spec;
}

EvolutionConfig with_method(Method method, double tol = 1e-10) {
    EvolutionConfig cfg;
    cfg.method = method;
    cfg.step_tolerance = tol;
    return cfg;
}

} // namespace

TEST(GroundState, KnownEndpoints) {
    const auto g = build_model(grover(64, 3));
    const Eigen::VectorXd u = ground_state(g, 0.0);
    EXPECT_NEAR(u(0), std::sqrt(3.0 / 64.0), 1e-14);
    EXPECT_NEAR(u(1), std::sqrt(61.0 / 64.0), 1e-14);
    const auto nb = build_model(qubits(ModelKind::nobarrier, 5, 2.0));
    const Eigen::VectorXd e = ground_state(nb, 1.0);
    EXPECT_NEAR(e(0), 1.0, 1e-14);
    EXPECT_NEAR(e.norm(), 1.0, 1e-14);
}

TEST(Methods, NamesRoundTrip) {
    for (Method m : {Method::exponential_midpoint, Method::magnus4, Method::high_order_explicit}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_THROW(parse_method("euler"), ValidationError);
    EXPECT_EQ(method_order(Method::exponential_midpoint), 2);
    EXPECT_EQ(method_order(Method::magnus4), 4);
}

TEST(Evolve, SingleQubitMatchesLargeGapFormula) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1));
    const double tau = 50.0;
    const auto r = evolve_schrodinger(h, tau);
    const double p = transition_probability(r.state, h);
    const double omega = oracle::nobarrier_unit_mu_omega();
    const double expected = std::pow(std::sin(omega * tau / 2.0), 2) / (tau * tau);
    EXPECT_NEAR(expected, 3.93e-4, 1e-6);
    EXPECT_NEAR(p, expected, 1e-5);
    EXPECT_LE(r.norm_error, 1e-10);
}

TEST(Evolve, SingleQubitMatchesIndependentRk4) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1, 2.0));
    const double tau = 37.0;
    const auto r = evolve_schrodinger(h, tau, with_method(Method::magnus4, 1e-11));
    const Eigen::VectorXcd start = ground_state(h, 0.0).cast<std::complex<double>>();
    const Eigen::VectorXcd reference = oracle::rk4_propagate(
        [&](double s) { return hamiltonian_at(h, s); }, start, tau, 40000);
    EXPECT_LT(phase_aligned_distance(r.state, reference), 1e-8);
}

TEST(Evolve, GroverMatchesFullSpace) {
    const int big_n = 4;
    const auto h = build_model(grover(big_n, 1));
    const double tau = 30.0;
    const auto r = evolve_schrodinger(h, tau, with_method(Method::magnus4, 1e-11));
    const auto full = oracle::full_grover(big_n, 1);
    const Eigen::VectorXcd start = Eigen::VectorXcd::Constant(big_n, 1.0 / std::sqrt(4.0));
    const Eigen::VectorXcd psi = oracle::rk4_propagate(
        [&](double s) {
            const double g = h.schedule.value(s);
            return Eigen::MatrixXd((1 - g) * full.h0 + g * full.h1);
        },
        start, tau, 40000);
    Eigen::VectorXcd reduced(2);
    reduced(0) = psi(0);
    reduced(1) = psi.tail(big_n - 1).sum() / std::sqrt(double(big_n - 1));
    EXPECT_NEAR(psi.norm(), 1.0, 1e-10);
    EXPECT_LT(phase_aligned_distance(r.state, reduced), 1e-8);
}

TEST(Evolve, MethodsAgree) {
    const auto h = build_model(qubits(ModelKind::barrier, 10, 1.0, 0.3, 0.5));
    const double tau = 40.0;
    const auto a = evolve_schrodinger(h, tau, with_method(Method::magnus4));
    const auto b = evolve_schrodinger(h, tau, with_method(Method::exponential_midpoint));
    const auto c = evolve_schrodinger(h, tau, with_method(Method::high_order_explicit));
    EXPECT_LT(phase_aligned_distance(a.state, b.state), 1e-8);
    EXPECT_LT(phase_aligned_distance(a.state, c.state), 1e-8);
    for (const auto* r : {&a, &b, &c}) EXPECT_LE(r->norm_error, 1e-10);
}

TEST(Evolve, ConvergenceOrder) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 3, 1.3));
    const double tau = 20.0;
    const Eigen::VectorXcd start = ground_state(h, 0.0).cast<std::complex<double>>();
    const Eigen::VectorXcd reference = propagate(h, start, tau, 1 << 16, Method::magnus4);
    for (Method m : {Method::exponential_midpoint, Method::magnus4, Method::high_order_explicit}) {
        // RK4 is only conditionally stable; start it inside its asymptotic range.
        const int base = m == Method::high_order_explicit ? 1024 : 64;
        std::vector<double> errors;
        for (int steps : {base, 2 * base, 4 * base}) {
            errors.push_back(phase_aligned_distance(propagate(h, start, tau, steps, m), reference));
        }
        const double order = method_order(m);
        for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
            const double observed = std::log2(errors[i] / errors[i + 1]);
            EXPECT_NEAR(observed, order, 0.3) << to_string(m);
        }
    }
}

TEST(Evolve, NormPreservedOnEveryAcceptedRun) {
    const auto h = build_model(qubits(ModelKind::cubic, 12));
    for (double tau : {5.0, 50.0, 200.0}) {
        const auto r = evolve_schrodinger(h, tau);
        EXPECT_LE(r.norm_error, 1e-10);
        EXPECT_LT(r.last_change, 1e-8);
    }
}

TEST(Evolve, Errors) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1));
    EXPECT_THROW(evolve_schrodinger(h, 0.0), ValidationError);
    EXPECT_THROW(evolve_schrodinger(h, -1.0), ValidationError);
    EvolutionConfig tight;
    tight.step_tolerance = 1e-14;
    tight.max_steps = 128;
    EXPECT_THROW(evolve_schrodinger(h, 500.0, tight), NumericalError);
    EvolutionConfig bad;
    bad.step_tolerance = 0.0;
    EXPECT_THROW(evolve_schrodinger(h, 1.0, bad), ValidationError);
}

TEST(TransitionProbability, Extremes) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 3));
    const Eigen::VectorXcd ground = ground_state(h, 1.0).cast<std::complex<double>>();
    EXPECT_NEAR(transition_probability(ground, h), 0.0, 1e-15);
    Eigen::VectorXcd other = Eigen::VectorXcd::Zero(4);
    other(2) = 1.0;
    EXPECT_NEAR(transition_probability(other, h), 1.0, 1e-15);
}

TEST(Sweep, MatchesSingleRunsAndValidates) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 2, 1.5));
    const std::vector<double> taus{10.0, 17.5, 30.0};
    const auto sweep = tau_sweep(h, taus, {}, 2);
    ASSERT_EQ(sweep.probs.size(), 3u);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto r = evolve_schrodinger(h, taus[i]);
        EXPECT_EQ(sweep.probs[i], transition_probability(r.state, h));
        EXPECT_GE(sweep.probs[i], 0.0);
        EXPECT_LE(sweep.probs[i], 1.0);
    }
    const std::vector<double> unordered{10.0, 5.0};
    EXPECT_THROW(tau_sweep(h, unordered), ValidationError);
    std::ostringstream csv;
    write_sweep_csv(csv, sweep);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "tau,p_transition,p_ground");
}

TEST(Sweep, DecaysLikeLargeGapBound) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1, 2.0));
    const auto taus = numeric::linspace(100.0, 1000.0, 10);
    const auto sweep = tau_sweep(h, taus);
    const auto [rho0, rho1] = rho_endpoints(gap_trace(h, 129));
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double bound = std::pow(std::abs(rho0) + std::abs(rho1), 2) / (taus[i] * taus[i]);
        EXPECT_LE(sweep.probs[i], bound * (1.0 + 1.0 / taus[i]));
    }
}

TEST(TwoLevel, MatchesFullEvolutionForSingleQubit) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1));
    const auto trace = gap_trace(h, 2049);
    for (double tau : {20.0, 35.0, 60.0}) {
        const auto two = evolve_two_level(trace, tau, 1);
        const auto full = evolve_schrodinger(h, tau);
        EXPECT_NEAR(two.leakage(), transition_probability(full.state, h), 1e-6) << tau;
        EXPECT_NEAR(two.total(), 1.0, 1e-6);
    }
}

TEST(TwoLevel, ZeroCouplingStaysInGround) {
    const auto h = build_model(qubits(ModelKind::nobarrier, 1));
    auto trace = gap_trace(h, 129);
    for (auto& p : trace.points) p.gamma = 0.0;
    const auto r = evolve_two_level(trace, 10.0, 3);
    EXPECT_EQ(std::abs(r.c1), 0.0);
    EXPECT_NEAR(std::abs(r.c0), 1.0, 1e-14);
    EXPECT_THROW(evolve_two_level(trace, 10.0, 0), ValidationError);
}
