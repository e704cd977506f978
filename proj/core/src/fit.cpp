#include "nadyn/fit.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/numeric.hpp"

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <utility>

namespace nadyn {

namespace {

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;

struct Data {
    std::vector<double> tau;
    std::vector<double> p;
    double scale = 1.0; // sum of P^2
};

Data prepare(std::span<const double> taus, std::span<const double> probs, double omega,
             const char* where) {
    if (taus.size() != probs.size()) {
        throw ValidationError(std::string(where) + ": tau and P columns differ in length");
    }
    if (taus.size() < 20) {
        throw ValidationError(std::string(where) + ": need at least 20 sweep points");
    }
    std::vector<std::pair<double, double>> points;
    points.reserve(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!(taus[i] > 0.0) || !std::isfinite(probs[i])) {
            throw ValidationError(std::string(where) + ": invalid sweep point");
        }
        points.emplace_back(taus[i], probs[i]);
    }
    // Sorted order makes every sum independent of the input permutation.
    std::sort(points.begin(), points.end());
    const double span = points.back().first - points.front().first;
    if (span * omega / (2.0 * std::numbers::pi) < 3.0) {
        throw ValidationError(std::string(where) +
                              ": sweep must span at least three oscillation periods");
    }
    Data d;
    double sum = 0.0;
    for (const auto& [t, p] : points) {
        d.tau.push_back(t);
        d.p.push_back(p);
        sum += p * p;
    }
    d.scale = sum > 0.0 ? sum : 1.0;
    return d;
}

// Normalised objective and its derivatives with respect to (A, log v).
struct Evaluation {
    double value = 0.0;
    double grad_a = 0.0;
    double grad_logv = 0.0;
    // Gauss-Newton curvature.
    double h_aa = 0.0;
    double h_av = 0.0;
    double h_vv = 0.0;
};

Evaluation evaluate(const Data& d, const SplitParams& p) {
    Evaluation e;
    const double k = std::numbers::pi * p.g * p.g / (4.0 * p.v);
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
        const double tau = d.tau[i];
        const double decay = std::exp(-k * tau);
        const double lambda = p.A * decay;
        const double s = p.rho0 * std::sin(p.omega_minus * tau) +
                         p.rho1 * std::sin(p.omega_plus * tau);
        const double r = predict_split(p, tau) - d.p[i];
        const double dp_dlambda = p.m * (2.0 * lambda + 2.0 * s / tau);
        const double ja = dp_dlambda * decay;
        const double jv = dp_dlambda * lambda * k * tau;
        e.value += r * r;
        e.grad_a += 2.0 * r * ja;
        e.grad_logv += 2.0 * r * jv;
        e.h_aa += 2.0 * ja * ja;
        e.h_av += 2.0 * ja * jv;
        e.h_vv += 2.0 * jv * jv;
    }
    const double inv = 1.0 / d.scale;
    e.value *= inv;
    e.grad_a *= inv;
    e.grad_logv *= inv;
    e.h_aa *= inv;
    e.h_av *= inv;
    e.h_vv *= inv;
    return e;
}

double objective(const Data& d, const SplitParams& p) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
        const double r = predict_split(p, d.tau[i]) - d.p[i];
        sum += r * r;
    }
    return sum / d.scale;
}

struct LineResult {
    double a = 0.0;
    double value = 0.0;
};

// Optimal A for the fixed parameters in p: prescan, Brent, then Newton
// polishing on the quartic-in-A objective.
LineResult best_a(const Data& d, SplitParams p, const FitOptions& options,
                  std::vector<double>* history) {
    const auto f = [&](double a) {
        p.A = a;
        return objective(d, p);
    };
    const auto grid = numeric::linspace(options.a_lo, options.a_hi,
                                        static_cast<std::size_t>(std::max(3, options.a_prescan)));
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double value = f(grid[i]);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    if (history) history->push_back(best_value);
    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, grid.size() - 1)];
    auto [a, value] = boost::math::tools::brent_find_minima(f, lo, hi, kBrentBits);
    if (value > best_value) {
        a = grid[best];
        value = best_value;
    }
    if (history) history->push_back(value);
    for (int iter = 0; iter < 8; ++iter) {
        p.A = a;
        const Evaluation e = evaluate(d, p);
        // Exact curvature: Gauss-Newton part plus the residual term 2 m e^2.
        double curvature = e.h_aa;
        const double k = std::numbers::pi * p.g * p.g / (4.0 * p.v);
        for (std::size_t i = 0; i < d.tau.size(); ++i) {
            const double decay = std::exp(-k * d.tau[i]);
            const double r = predict_split(p, d.tau[i]) - d.p[i];
            curvature += 2.0 * r * 2.0 * p.m * decay * decay / d.scale;
        }
        if (!(curvature > 0.0)) break;
        const double trial = std::clamp(a - e.grad_a / curvature, options.a_lo, options.a_hi);
        const double trial_value = f(trial);
        if (!(trial_value <= value) || trial == a) break;
        a = trial;
        value = trial_value;
        if (history) history->push_back(value);
    }
    return {a, value};
}

bool on_edge(double x, double lo, double hi) {
    const double tol = 1e-9 * std::max(1.0, hi - lo);
    return x <= lo + tol || x >= hi - tol;
}

FitResult finish(const Data& d, const SplitParams& p, FitResult fit) {
    const Evaluation e = evaluate(d, p);
    double sum = 0.0;
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
        const double r = predict_split(p, d.tau[i]) - d.p[i];
        sum += r * r;
    }
    fit.rms_residual = std::sqrt(sum / static_cast<double>(d.tau.size()));
    fit.n_points = d.tau.size();
    fit.gradient_norm =
        fit.v_hat ? std::hypot(e.grad_a, e.grad_logv) : std::abs(e.grad_a);
    return fit;
}

} // namespace

double rms(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v * v;
    return std::sqrt(sum / static_cast<double>(values.size()));
}

double rms_residual(std::span<const double> taus, std::span<const double> probs,
                    const SplitParams& p) {
    if (taus.size() != probs.size() || taus.empty()) {
        throw ValidationError("rms_residual: need matching non-empty columns");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double r = predict_split(p, taus[i]) - probs[i];
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(taus.size()));
}

FitResult fit_A(std::span<const double> taus, std::span<const double> probs,
                const SplitParams& p, const FitOptions& options) {
    if (!(options.a_hi > options.a_lo)) {
        throw ValidationError("fit_A: empty A bracket");
    }
    SplitParams q = p;
    q.A = 0.0;
    q.validate();
    const Data d = prepare(taus, probs, q.omega_minus + q.omega_plus, "fit_A");

    FitResult fit;
    const LineResult line = best_a(d, q, options, &fit.objective_history);
    q.A = line.a;
    fit.a_hat = line.a;
    fit = finish(d, q, std::move(fit));
    fit.at_boundary = on_edge(line.a, options.a_lo, options.a_hi);
    fit.converged = fit.gradient_norm <= options.gradient_tolerance && !fit.at_boundary;
    return fit;
}

FitResult fit_A(const SweepResult& sweep, const SplitParams& p, const FitOptions& options) {
    return fit_A(sweep.taus, sweep.probs, p, options);
}

FitResult fit_A_v(std::span<const double> taus, std::span<const double> probs,
                  const SplitParams& p, const FitOptions& options) {
    if (!(options.a_hi > options.a_lo) || options.v_grid < 3) {
        throw ValidationError("fit_A_v: invalid search options");
    }
    SplitParams q = p;
    q.A = 0.0;
    if (!(q.v > 0.0)) q.v = 1.0; // placeholder, replaced by the search
    q.validate();
    const Data d = prepare(taus, probs, q.omega_minus + q.omega_plus, "fit_A_v");

    // Decay rates from 1% to 50 e-folds across the window.
    const double pg = std::numbers::pi * q.g * q.g / 4.0;
    const double log_lo = std::log(pg * d.tau.front() / 50.0);
    const double log_hi = std::log(pg * d.tau.back() / 0.01);
    const auto grid = numeric::linspace(log_lo, log_hi, static_cast<std::size_t>(options.v_grid));

    FitResult fit;
    double best_value = std::numeric_limits<double>::infinity();
    const auto profile = [&](double log_v) {
        SplitParams trial = q;
        trial.v = std::exp(log_v);
        const LineResult line = best_a(d, trial, options, nullptr);
        if (line.value < best_value) {
            best_value = line.value;
            fit.objective_history.push_back(line.value);
        }
        return line;
    };

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = profile(grid[i]).value;
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const bool flat = *hi_it - *lo_it <= 1e-12 * std::max(1.0, *hi_it);

    // Local minima of the profile, best first; refine the three best.
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const bool left = i == 0 || values[i] <= values[i - 1];
        const bool right = i + 1 == grid.size() || values[i] <= values[i + 1];
        if (left && right) minima.push_back(i);
    }
    std::sort(minima.begin(), minima.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    if (minima.size() > 3) minima.resize(3);

    double best_log_v = grid[minima.front()];
    double best_start = values[minima.front()];
    for (const std::size_t i : minima) {
        const double lo = grid[i == 0 ? 0 : i - 1];
        const double hi = grid[std::min(i + 1, grid.size() - 1)];
        const auto [x, value] = boost::math::tools::brent_find_minima(
            [&](double lv) { return profile(lv).value; }, lo, hi, kBrentBits);
        if (value < best_start) {
            best_start = value;
            best_log_v = x;
        }
    }

    // Gauss-Newton polish in (A, log v).
    SplitParams cur = q;
    cur.v = std::exp(best_log_v);
    cur.A = best_a(d, cur, options, nullptr).a;
    double cur_value = objective(d, cur);
    for (int iter = 0; iter < 50; ++iter) {
        const Evaluation e = evaluate(d, cur);
        const double det = e.h_aa * e.h_vv - e.h_av * e.h_av;
        if (!(det > 0.0)) break;
        const double da = -(e.h_vv * e.grad_a - e.h_av * e.grad_logv) / det;
        const double dl = -(e.h_aa * e.grad_logv - e.h_av * e.grad_a) / det;
        bool accepted = false;
        for (double step = 1.0; step > 1e-4; step *= 0.5) {
            SplitParams trial = cur;
            trial.A = std::clamp(cur.A + step * da, options.a_lo, options.a_hi);
            trial.v = cur.v * std::exp(step * dl);
            const double value = objective(d, trial);
            if (value < cur_value) {
                cur = trial;
                cur_value = value;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        if (cur_value < best_value) {
            best_value = cur_value;
            fit.objective_history.push_back(cur_value);
        }
    }

    fit.a_hat = cur.A;
    fit.v_hat = cur.v;
    fit = finish(d, cur, std::move(fit));
    const double log_v = std::log(cur.v);
    fit.at_boundary = on_edge(cur.A, options.a_lo, options.a_hi) ||
                      log_v <= log_lo + 1e-9 || log_v >= log_hi - 1e-9;
    fit.degenerate = flat || std::abs(cur.A) < 1e-4;
    fit.converged = fit.gradient_norm <= options.gradient_tolerance && !fit.at_boundary &&
                    !fit.degenerate;
    return fit;
}

FitResult fit_A_v(const SweepResult& sweep, const SplitParams& p, const FitOptions& options) {
    return fit_A_v(sweep.taus, sweep.probs, p, options);
}

FitResult fit_large_gap_scale(std::span<const double> taus, std::span<const double> probs,
                              const LargeGapParams& p) {
    p.validate();
    const Data d = prepare(taus, probs, p.omega, "fit_large_gap_scale");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
        const double f = predict_large_gap(p, d.tau[i]);
        num += f * d.p[i];
        den += f * f;
    }
    FitResult fit;
    fit.a_hat = den > 0.0 ? num / den : 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
        const double r = fit.a_hat * predict_large_gap(p, d.tau[i]) - d.p[i];
        sum += r * r;
    }
    fit.rms_residual = std::sqrt(sum / static_cast<double>(d.tau.size()));
    fit.n_points = d.tau.size();
    fit.converged = den > 0.0;
    fit.degenerate = !(den > 0.0);
    fit.objective_history.push_back(sum / d.scale);
    return fit;
}

std::string fit_result_json(const FitResult& fit, const SplitParams& p,
                            std::span<const double> taus, const io::Provenance& provenance) {
    nlohmann::ordered_json j;
    j["tool_version"] = provenance.tool_version;
    j["config_hash"] = provenance.config_hash;
    j["a_hat"] = fit.a_hat;
    if (fit.v_hat) {
        j["v_hat"] = *fit.v_hat;
    } else {
        j["v_hat"] = nullptr;
    }
    j["rms_residual"] = fit.rms_residual;
    j["n_points"] = fit.n_points;
    j["converged"] = fit.converged;
    j["at_boundary"] = fit.at_boundary;
    j["degenerate"] = fit.degenerate;
    j["gradient_norm"] = fit.gradient_norm;
    j["objective_history"] = fit.objective_history;
    j["parameters"] = {{"rho0", p.rho0},
                       {"rho1", p.rho1},
                       {"omega_minus", p.omega_minus},
                       {"omega_plus", p.omega_plus},
                       {"g", p.g},
                       {"v", fit.v_hat ? *fit.v_hat : p.v},
                       {"m", p.m}};
    if (!taus.empty()) {
        const auto [lo, hi] = std::minmax_element(taus.begin(), taus.end());
        j["tau_range"] = {*lo, *hi};
    }
    return j.dump(2) + "\n";
}

} // namespace nadyn
