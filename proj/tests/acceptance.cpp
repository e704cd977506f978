// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "oracles.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/evolve.hpp"
#include "nadyn/experiment.hpp"
#include "nadyn/fit.hpp"
#include "nadyn/model.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/predict.hpp"
#include "nadyn/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace nadyn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

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

struct Extremum {
    double tau;
    bool maximum;
};

// Strict interior extrema of a sampled curve.
std::vector<Extremum> extrema(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double left = y[i] - y[i - 1];
        const double right = y[i + 1] - y[i];
        if (left * right < 0.0) {
            out.push_back({x[i], left > 0.0});
        }
    }
    return out;
}

// Vertex of the parabola through three equally spaced samples.
double parabolic_vertex(double x, double h, double ym, double y0, double yp) {
    const double denom = ym - 2.0 * y0 + yp;
    return denom == 0.0 ? x : x + 0.5 * h * (ym - yp) / denom;
}

// 1. Reduced models against full Hilbert-space diagonalisation.
Outcome oracle_equivalence() {
    double worst_qubit = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (const auto& spec : {qubits(ModelKind::barrier, n, 1.0, 0.3, 0.5),
                                 qubits(ModelKind::cubic, n)}) {
            const auto h = build_model(spec);
            const auto f = cost_function(spec);
            const Eigen::MatrixXd full0 = oracle::full_transverse_field(n);
            const Eigen::MatrixXd full1 = oracle::full_cost(n, [&](int k) { return f[k]; });
            for (int i = 0; i <= 10; ++i) {
                const double s = i / 10.0;
                const auto reduced = eigensystem_lowest(hamiltonian_at(h, s), 3);
                const auto full =
                    oracle::symmetric_sector_lowest((1 - s) * full0 + s * full1, n, 3);
                for (int k = 0; k < 3; ++k) {
                    worst_qubit = std::max(worst_qubit, std::abs(reduced.values(k) - full(k)));
                }
            }
        }
    }
    double worst_grover = 0.0;
    for (int big_n = 2; big_n <= 12; ++big_n) {
        for (int big_m = 1; big_m < big_n; ++big_m) {
            const auto h = build_model(grover(big_n, big_m));
            const auto full = oracle::full_grover(big_n, big_m);
            for (int i = 0; i <= 10; ++i) {
                const double s = i / 10.0;
                const double g = h.schedule.value(s);
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                    (1 - g) * full.h0 + g * full.h1 + 1e3 * full.outside);
                const auto reduced = eigensystem_lowest(hamiltonian_at(h, s), 2);
                for (int k = 0; k < 2; ++k) {
                    worst_grover =
                        std::max(worst_grover, std::abs(reduced.values(k) - es.eigenvalues()(k)));
                }
            }
        }
    }
    return {worst_qubit <= 1e-10 && worst_grover <= 1e-12,
            fmt("max qubit eigenvalue error %.2e (tol 1e-10), max Grover error %.2e (tol 1e-12)",
                worst_qubit, worst_grover)};
}

// 2. Decoupled single qubit: direct evolution against the large-gap formula.
Outcome single_qubit_reproduction() {
    const auto taus = numeric::linspace(20.0, 100.0, 161);
    bool pass = true;
    std::string detail;
    for (double mu : {1.0, 2.0, 4.0}) {
        const auto h = build_model(qubits(ModelKind::nobarrier, 1, mu));
        const auto trace = gap_trace(h, 1025);
        const auto crossing = locate_crossing(h, trace);
        const auto inputs = prediction_inputs(h, trace, crossing);
        const auto sweep = tau_sweep(h, taus);
        double worst_ratio = 0.0;
        std::vector<double> y(taus.size());
        for (std::size_t i = 0; i < taus.size(); ++i) {
            const double t = taus[i];
            const double diff = std::abs(sweep.probs[i] - predict_large_gap(inputs.large, t));
            worst_ratio = std::max(worst_ratio, diff / (5.0 / (t * t * t)));
            y[i] = t * t * sweep.probs[i];
        }
        // Zero crossings of the oscillating part of tau^2 P, after removing a
        // least-squares trend in powers of 1/tau.
        Eigen::MatrixXd basis(taus.size(), 3);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            basis.row(static_cast<Eigen::Index>(i)) << 1.0, 1.0 / taus[i], 1.0 / (taus[i] * taus[i]);
        }
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
        const Eigen::VectorXd trend = basis * basis.colPivHouseholderQr().solve(yv);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            y[i] -= trend(static_cast<Eigen::Index>(i));
        }
        std::vector<double> crossings;
        for (std::size_t i = 0; i + 1 < y.size(); ++i) {
            const double a = y[i];
            const double b = y[i + 1];
            if (a * b < 0.0) {
                crossings.push_back(taus[i] + (taus[i + 1] - taus[i]) * a / (a - b));
            }
        }
        double freq_error = 1.0;
        if (crossings.size() >= 3) {
            const double omega_est = std::numbers::pi * static_cast<double>(crossings.size() - 1) /
                                     (crossings.back() - crossings.front());
            freq_error = std::abs(omega_est - crossing.omega) / crossing.omega;
        }
        const bool ok = worst_ratio <= 1.0 && freq_error <= 0.01;
        pass = pass && ok;
        detail += fmt("mu=%g: max|dP|/(5 tau^-3) %.3f, omega error %.3f%%; ", mu, worst_ratio,
                      100.0 * freq_error);
    }
    return {pass, detail};
}

// 3. Closed forms of the decoupled model.
Outcome closed_forms() {
    bool endpoints = true;
    for (double mu : {0.5, 1.0, 2.0, 3.0, 4.0}) {
        endpoints = endpoints && nobarrier_gap(0.0, mu) == 1.0 &&
                    nobarrier_gap(1.0, mu) == std::sqrt(mu);
    }
    double worst_gamma = 0.0;
    for (double mu : {0.5, 1.0, 2.0, 4.0}) {
        const auto h = build_model(qubits(ModelKind::nobarrier, 1, mu));
        const auto trace = gap_trace(h, 1025);
        for (const auto& p : trace.points) {
            worst_gamma = std::max(worst_gamma, std::abs(std::abs(p.gamma) * p.delta - mu / 2.0));
        }
    }
    const auto h = build_model(qubits(ModelKind::nobarrier, 1, 1.0));
    const double omega = gap_integral(h, 0.0, 1.0);
    const double oracle_omega = oracle::nobarrier_unit_mu_omega();
    const bool ok = endpoints && worst_gamma <= 1e-10 && std::abs(omega - 0.811617) <= 1e-5 &&
                    std::abs(omega - oracle_omega) <= 1e-10;
    return {ok, fmt("endpoints exact: %s, max|gamma Delta - mu/2| %.2e, omega %.8f (oracle "
                    "%.8f, reference 0.811617)",
                    endpoints ? "yes" : "no", worst_gamma, omega, oracle_omega)};
}

struct BarrierSweep {
    SweepResult sweep;
    SplitParams params;
    CrossingParams crossing;
};

const BarrierSweep& barrier_sweep() {
    static const BarrierSweep data = [] {
        BarrierSweep out;
        const auto h = build_model(qubits(ModelKind::barrier, 84, 1.0, 0.3, 0.5));
        const auto trace = gap_trace(h, 1025);
        out.crossing = locate_crossing(h, trace);
        const auto inputs = prediction_inputs(h, trace, out.crossing);
        if (!inputs.split) {
            throw NumericalError("n=84 barrier shows no avoided crossing");
        }
        out.params = *inputs.split;
        const auto taus = numeric::linspace(100.0, 600.0, 101);
        out.sweep = tau_sweep(h, taus);
        return out;
    }();
    return data;
}

// 4. Barrier n = 84: fitted Landau-Zener prefactor.
Outcome barrier_fit() {
    const auto& d = barrier_sweep();
    const auto fit = fit_A(d.sweep, d.params);
    const double ratio = fit.rms_residual / rms(d.sweep.probs);
    const bool ok = fit.a_hat >= 0.08 && fit.a_hat <= 0.14 && ratio <= 0.15;
    return {ok, fmt("g %.5f, v %.3f, omega-/+ %.5f/%.5f, a_hat %.4f (bracket [0.08, 0.14]), "
                    "rms/rms(P) %.3f (tol 0.15), converged %s",
                    d.crossing.g, d.crossing.v, d.crossing.omega_minus, d.crossing.omega_plus,
                    fit.a_hat, ratio, fit.converged ? "yes" : "no")};
}

// 5. Two-frequency model against the best single-frequency description.
Outcome frequency_splitting() {
    const auto& d = barrier_sweep();
    const auto split = fit_A(d.sweep, d.params);
    const auto single = fit_large_gap_scale(d.sweep.taus, d.sweep.probs, d.params.large_gap());
    const double factor = single.rms_residual / split.rms_residual;
    return {factor >= 2.0, fmt("rms single %.3e, rms split %.3e, factor %.2f (need >= 2)",
                               single.rms_residual, split.rms_residual, factor)};
}

// 6. Cubic n = 30: joint (A, v) fit and extremum positions.
Outcome cubic_fit() {
    const auto h = build_model(qubits(ModelKind::cubic, 30));
    const auto trace = gap_trace(h, 1025);
    const auto crossing = locate_crossing(h, trace);
    const auto inputs = prediction_inputs(h, trace, crossing);
    if (!inputs.split) {
        return {false, "no avoided crossing found"};
    }
    const double spacing = 0.5;
    const auto taus = numeric::linspace(20.0, 120.0, 201);
    const auto sweep = tau_sweep(h, taus);
    const auto fit = fit_A_v(sweep, *inputs.split);
    auto fitted = *inputs.split;
    fitted.A = fit.a_hat;
    fitted.v = fit.v_hat.value_or(fitted.v);

    const auto fine = numeric::linspace(taus.front(), taus.back(), 20001);
    std::vector<double> curve;
    for (double t : fine) curve.push_back(predict_split(fitted, t));
    const auto data_ext = extrema(taus, sweep.probs);
    const auto fit_ext = extrema(fine, curve);
    std::size_t matched = 0;
    for (const auto& e : data_ext) {
        const bool hit = std::any_of(fit_ext.begin(), fit_ext.end(), [&](const Extremum& f) {
            return f.maximum == e.maximum && std::abs(f.tau - e.tau) <= 0.5 * spacing;
        });
        matched += hit ? 1 : 0;
    }
    const bool ok = fit.converged && matched == data_ext.size() && fit_ext.size() == data_ext.size();
    return {ok, fmt("a_hat %.4f, v_hat %.3f (trace v %.3f), converged %s, rms/rms(P) %.4f; "
                    "data extrema %zu, fitted extrema %zu, data extrema matched within %.2f: %zu",
                    fit.a_hat, fitted.v, crossing.v, fit.converged ? "yes" : "no",
                    fit.rms_residual / rms(sweep.probs), data_ext.size(), fit_ext.size(),
                    0.5 * spacing, matched)};
}

// 7. Grover N = 64, M = 1 under the locally adiabatic schedule.
Outcome grover_check() {
    const std::int64_t big_n = 64, big_m = 1;
    const auto h = build_model(grover(big_n, big_m));
    const double omega = grover_omega(big_n, big_m);
    const double quad = gap_integral(h, 0.0, 1.0);
    const double rho = grover_rho(big_n, big_m);
    // Adiabatic regime: an order of magnitude beyond max |gamma| / Delta^2.
    const double tau_adiabatic = 10.0 * adiabatic_time_estimate(gap_trace(h, 1025));

    const double step = 0.25;
    const auto taus = numeric::linspace(10.0, 300.0, 1161);
    const auto sweep = tau_sweep(h, taus);
    const auto& p = sweep.probs;

    double worst_min = 0.0;
    double worst_peak = 0.0;
    int minima = 0, peaks = 0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        const bool is_min = p[i] < p[i - 1] && p[i] <= p[i + 1];
        const bool is_max = p[i] > p[i - 1] && p[i] >= p[i + 1];
        if (!is_min && !is_max) continue;
        const double t = parabolic_vertex(taus[i], step, p[i - 1], p[i], p[i + 1]);
        if (t < tau_adiabatic) continue;
        if (is_min) {
            const double k = std::round(t * omega / (2.0 * std::numbers::pi));
            const double target = 2.0 * std::numbers::pi * k / omega;
            worst_min = std::max(worst_min, std::abs(t - target) / target);
            ++minima;
        } else {
            const double predicted = 4.0 * rho * rho / (t * t);
            const double height = p[i] + 0.125 * std::pow(p[i + 1] - p[i - 1], 2) /
                                             (2.0 * p[i] - p[i - 1] - p[i + 1]);
            worst_peak = std::max(worst_peak, std::abs(height - predicted) / predicted);
            ++peaks;
        }
    }
    const bool ok = std::abs(omega - quad) <= 1e-8 && minima > 0 && peaks > 0 &&
                    worst_min <= 0.02 && worst_peak <= 0.10;
    return {ok, fmt("omega %.8f vs quadrature %.8f; for tau >= %.1f: %d minima, worst offset "
                    "%.3f%% (tol 2%%), %d peaks, worst height error %.2f%% (tol 10%%)",
                    omega, quad, tau_adiabatic, minima, 100.0 * worst_min, peaks,
                    100.0 * worst_peak)};
}

// 8. Integrator properties.
Outcome integrator_properties() {
    double worst_norm = 0.0;
    for (const auto& spec : {qubits(ModelKind::nobarrier, 3, 1.3), qubits(ModelKind::cubic, 12),
                             qubits(ModelKind::barrier, 20, 1.0, 0.3, 0.5), grover(64, 1)}) {
        const auto h = build_model(spec);
        for (Method m : {Method::exponential_midpoint, Method::magnus4,
                         Method::high_order_explicit}) {
            EvolutionConfig cfg;
            cfg.method = m;
            for (double tau : {10.0, 60.0}) {
                worst_norm = std::max(worst_norm, evolve_schrodinger(h, tau, cfg).norm_error);
            }
        }
    }

    const auto h = build_model(qubits(ModelKind::nobarrier, 3, 1.3));
    const double tau = 20.0;
    const StateVector start = ground_state(h, 0.0).cast<std::complex<double>>();
    const StateVector reference = propagate(h, start, tau, 1 << 16, Method::magnus4);
    bool orders_ok = true;
    std::string orders;
    for (Method m : {Method::exponential_midpoint, Method::magnus4, Method::high_order_explicit}) {
        const std::int64_t base = m == Method::high_order_explicit ? 1024 : 64;
        const double e1 = phase_aligned_distance(propagate(h, start, tau, base, m), reference);
        const double e2 = phase_aligned_distance(propagate(h, start, tau, 2 * base, m), reference);
        const double observed = std::log2(e1 / e2);
        orders_ok = orders_ok && std::abs(observed - method_order(m)) <= 0.3;
        orders += fmt("%s %.2f/%d, ", std::string(to_string(m)).c_str(), observed,
                      method_order(m));
    }

    const auto single = build_model(qubits(ModelKind::nobarrier, 1));
    const auto trace = gap_trace(single, 2049);
    double worst_two_level = 0.0;
    for (double t : {20.0, 40.0, 70.0, 100.0}) {
        const auto two = evolve_two_level(trace, t, 1);
        const double full = transition_probability(evolve_schrodinger(single, t).state, single);
        worst_two_level = std::max(worst_two_level, std::abs(two.leakage() - full));
    }
    const bool ok = worst_norm <= 1e-10 && orders_ok && worst_two_level <= 1e-6;
    return {ok, fmt("max norm error %.1e; observed orders %smax two-level difference %.1e",
                    worst_norm, orders.c_str(), worst_two_level)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Fit round trips and determinism of every output mode.
Outcome round_trips() {
    SplitParams p;
    p.rho0 = 0.5;
    p.rho1 = 0.3;
    p.omega_minus = 0.32;
    p.omega_plus = 0.52;
    p.g = 0.05;
    p.v = 0.5;
    p.A = 0.25;
    const auto taus = numeric::linspace(20.0, 200.0, 181);
    std::vector<double> probs;
    for (double t : taus) probs.push_back(predict_split(p, t));
    const double a_error = std::abs(fit_A(taus, probs, p).a_hat - 0.25);

    p.A = 0.2;
    probs.clear();
    for (double t : taus) probs.push_back(predict_split(p, t));
    auto start = p;
    start.v = 3.0;
    const auto joint = fit_A_v(taus, probs, start);
    const double av_error =
        std::max(std::abs(joint.a_hat / 0.2 - 1.0), std::abs(joint.v_hat.value_or(0.0) / 0.5 - 1.0));

    const fs::path dir = fs::temp_directory_path() / "nadyn_acceptance_determinism";
    fs::remove_all(dir);
    const char* configs[] = {
        R"({"mode": "gap", "model": {"kind": "cubic", "n": 16}})",
        R"({"mode": "sweep", "model": {"kind": "barrier", "n": 16, "alpha": 0.3, "beta": 0.3},
            "tau_grid": {"min": 20, "max": 80, "count": 31}})",
        R"({"mode": "predict", "model": {"kind": "nobarrier", "n": 1, "mu": 2},
            "tau_grid": {"min": 10, "max": 100, "count": 91}})",
        R"({"mode": "fit", "model": {"kind": "barrier", "n": 16, "alpha": 0.3, "beta": 0.3},
            "tau_grid": {"min": 20, "max": 80, "count": 31}})",
        R"({"mode": "grover", "model": {"kind": "grover", "N": 64, "M": 1},
            "tau_grid": {"min": 10, "max": 100, "count": 46}})",
    };
    std::size_t files = 0, identical = 0;
    for (std::size_t i = 0; i < std::size(configs); ++i) {
        auto cfg = ExperimentConfig::from_json(configs[i]);
        cfg.outputs = (dir / std::to_string(i)).string();
        cfg.validate();
        const auto first = run_experiment(cfg);
        std::vector<std::string> contents;
        for (const auto& f : first.files) contents.push_back(slurp(f));
        const auto second = run_experiment(cfg);
        if (second.files != first.files) continue;
        for (std::size_t k = 0; k < first.files.size(); ++k) {
            ++files;
            identical += contents[k] == slurp(second.files[k]) ? 1 : 0;
        }
    }
    fs::remove_all(dir);
    const bool ok = a_error <= 1e-6 && av_error <= 1e-4 && files > 0 && identical == files;
    return {ok, fmt("|A error| %.1e (tol 1e-6), (A, v) relative error %.1e (tol 1e-4), "
                    "%zu/%zu output files byte-identical on rerun",
                    a_error, av_error, identical, files)};
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"reduced-space oracle equivalence", oracle_equivalence},
        {"decoupled qubit sweeps vs large-gap formula", single_qubit_reproduction},
        {"closed-form gap, coupling and frequency", closed_forms},
        {"barrier n=84 fitted prefactor", barrier_fit},
        {"frequency splitting beats single frequency", frequency_splitting},
        {"cubic n=30 joint fit and extrema", cubic_fit},
        {"Grover N=64 minima and peaks", grover_check},
        {"integrator properties", integrator_properties},
        {"fit round trips and determinism", round_trips},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
