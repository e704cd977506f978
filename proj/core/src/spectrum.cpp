#include "nadyn/spectrum.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/io.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/parallel.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace nadyn {

namespace {

bool is_tridiagonal(const Eigen::MatrixXd& h) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            if (std::abs(i - j) > 1 && h(i, j) != 0.0) {
                return false;
            }
        }
    }
    return true;
}

void canonical_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) {
        v = -v;
    }
}

// Eigenvectors of the lowest two levels at s.
struct Sample {
    double s = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    Eigen::VectorXd phi0;
    Eigen::VectorXd phi1;
};

Sample sample_at(const ReducedHamiltonian& model, double s) {
    const Eigenpairs pairs = eigensystem_lowest(hamiltonian_at(model, s), 2);
    Sample out;
    out.s = s;
    out.lambda0 = pairs.values(0);
    out.lambda1 = pairs.values(1);
    out.phi0 = pairs.vectors.col(0);
    out.phi1 = pairs.vectors.col(1);
    if (!(out.lambda1 - out.lambda0 > 0.0)) {
        std::ostringstream msg;
        msg << "degenerate ground state at s=" << s << " (lambda0=" << out.lambda0
            << ", lambda1=" << out.lambda1 << ")";
        throw NumericalError(msg.str());
    }
    return out;
}

SpectralPoint point_from(const ReducedHamiltonian& model, const Sample& sample) {
    const Eigen::MatrixXd dh = dH_ds(model, sample.s);
    SpectralPoint p;
    p.s = sample.s;
    p.lambda0 = sample.lambda0;
    p.lambda1 = sample.lambda1;
    p.delta = sample.lambda1 - sample.lambda0;
    p.gamma = sample.phi0.dot(dh * sample.phi1);
    p.rho = p.gamma / (p.delta * p.delta);
    p.d_delta = sample.phi1.dot(dh * sample.phi1) - sample.phi0.dot(dh * sample.phi0);
    return p;
}

std::vector<Sample> compute_samples(const ReducedHamiltonian& model,
                                    std::span<const double> grid, std::size_t threads) {
    std::vector<Sample> samples(grid.size());
    parallel_for(
        grid.size(), [&](std::size_t i) { samples[i] = sample_at(model, grid[i]); }, threads);
    return samples;
}

void insert_sorted(std::vector<Sample>& samples, std::vector<Sample> extra) {
    samples.insert(samples.end(), std::make_move_iterator(extra.begin()),
                   std::make_move_iterator(extra.end()));
    std::sort(samples.begin(), samples.end(),
              [](const Sample& a, const Sample& b) { return a.s < b.s; });
    samples.erase(std::unique(samples.begin(), samples.end(),
                              [](const Sample& a, const Sample& b) { return a.s == b.s; }),
                  samples.end());
}

double gap_at(const ReducedHamiltonian& model, double s) {
    const Sample sample = sample_at(model, s);
    return sample.lambda1 - sample.lambda0;
}

double gap_slope_at(const ReducedHamiltonian& model, double s) {
    return point_from(model, sample_at(model, s)).d_delta;
}

} // namespace

Eigenpairs eigensystem_lowest(const Eigen::MatrixXd& h, Eigen::Index k) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw ValidationError("eigensystem_lowest: matrix must be square and non-empty");
    }
    if (k < 1 || k > h.rows()) {
        throw ValidationError("eigensystem_lowest: requested count out of range");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (h.rows() > 2 && is_tridiagonal(h)) {
        const Eigen::VectorXd diag = h.diagonal();
        const Eigen::VectorXd sub = h.diagonal(-1);
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    } else {
        solver.compute(h, Eigen::ComputeEigenvectors);
    }
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensystem_lowest: eigensolver did not converge (dim=" << h.rows()
            << ", max|h|=" << h.cwiseAbs().maxCoeff() << ")";
        throw NumericalError(msg.str());
    }

    Eigenpairs out;
    out.values = solver.eigenvalues().head(k);
    out.vectors = solver.eigenvectors().leftCols(k);

    const double scale =
        std::max({std::abs(solver.eigenvalues()(0)),
                  std::abs(solver.eigenvalues()(h.rows() - 1)), 1e-300});
    for (Eigen::Index j = 0; j < k; ++j) {
        canonical_sign(out.vectors.col(j));
        const double residual =
            (h * out.vectors.col(j) - out.values(j) * out.vectors.col(j)).norm();
        if (residual > 1e-10 * scale) {
            std::ostringstream msg;
            msg << "eigensystem_lowest: residual " << residual << " for eigenpair " << j
                << " exceeds 1e-10 * ||H|| = " << 1e-10 * scale;
            throw NumericalError(msg.str());
        }
    }
    return out;
}

std::vector<double> GapTrace::s_values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.s);
    }
    return out;
}

std::vector<double> GapTrace::deltas() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        out.push_back(p.delta);
    }
    return out;
}

SpectralPoint spectral_point(const ReducedHamiltonian& model, double s) {
    return point_from(model, sample_at(model, s));
}

GapTrace gap_trace(const ReducedHamiltonian& model, std::span<const double> grid,
                   const GapTraceOptions& options) {
    if (grid.size() < 64) {
        throw ValidationError("gap_trace: grid needs at least 64 points");
    }
    if (grid.front() != 0.0 || grid.back() != 1.0) {
        throw ValidationError("gap_trace: grid must start at s=0 and end at s=1");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("gap_trace: grid must be strictly increasing");
        }
    }

    std::vector<Sample> samples = compute_samples(model, grid, options.threads);

    // Denser sampling around the discrete gap minimum.
    {
        std::size_t imin = 0;
        for (std::size_t i = 1; i < samples.size(); ++i) {
            const double d = samples[i].lambda1 - samples[i].lambda0;
            if (d < samples[imin].lambda1 - samples[imin].lambda0) {
                imin = i;
            }
        }
        if (imin > 0 && imin + 1 < samples.size() && options.minimum_refinement > 0) {
            std::vector<double> extra;
            const int count = options.minimum_refinement;
            for (const auto& [a, b] : {std::pair{samples[imin - 1].s, samples[imin].s},
                                       std::pair{samples[imin].s, samples[imin + 1].s}}) {
                for (int j = 1; j <= count; ++j) {
                    extra.push_back(a + (b - a) * j / (count + 1.0));
                }
            }
            insert_sorted(samples, compute_samples(model, extra, options.threads));
        }
    }

    // Sequential gauge pass: bisect wherever neighbouring eigenvectors are not
    // close enough to carry the sign reliably.
    GapTrace trace;
    trace.gauge_continuous = true;
    const double min_width = std::ldexp(grid[1] - grid[0], -options.max_bisections);
    std::size_t i = 1;
    while (i < samples.size()) {
        Sample& prev = samples[i - 1];
        Sample& cur = samples[i];
        const double ov0 = prev.phi0.dot(cur.phi0);
        const double ov1 = prev.phi1.dot(cur.phi1);
        const bool weak =
            std::abs(ov0) < options.overlap_threshold || std::abs(ov1) < options.overlap_threshold;
        if (weak && cur.s - prev.s > min_width) {
            const double mid = 0.5 * (prev.s + cur.s);
            samples.insert(samples.begin() + static_cast<std::ptrdiff_t>(i), sample_at(model, mid));
            continue;
        }
        if (weak) {
            trace.gauge_continuous = false;
        }
        if (ov0 < 0.0) {
            cur.phi0 = -cur.phi0;
        }
        if (ov1 < 0.0) {
            cur.phi1 = -cur.phi1;
        }
        ++i;
    }

    trace.points.reserve(samples.size());
    trace.ground.reserve(samples.size());
    trace.excited.reserve(samples.size());
    for (auto& sample : samples) {
        trace.points.push_back(point_from(model, sample));
        trace.ground.push_back(std::move(sample.phi0));
        trace.excited.push_back(std::move(sample.phi1));
    }
    return trace;
}

GapTrace gap_trace(const ReducedHamiltonian& model, std::size_t grid_points,
                   const GapTraceOptions& options) {
    const auto grid = numeric::linspace(0.0, 1.0, grid_points);
    return gap_trace(model, grid, options);
}

std::string_view to_string(CrossingKind kind) {
    switch (kind) {
    case CrossingKind::monotone: return "monotone";
    case CrossingKind::shallow: return "shallow";
    case CrossingKind::avoided: return "avoided";
    }
    return "unknown";
}

double gap_integral(const ReducedHamiltonian& model, double a, double b, double abs_tol) {
    return numeric::integrate([&](double s) { return gap_at(model, s); }, a, b, abs_tol);
}

CrossingParams locate_crossing(const ReducedHamiltonian& model, const GapTrace& trace) {
    if (trace.points.size() < 3) {
        throw ValidationError("locate_crossing: trace too short");
    }
    const auto& pts = trace.points;
    std::size_t imin = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].delta < pts[imin].delta) {
            imin = i;
        }
    }

    CrossingParams out;
    if (imin == 0 || imin + 1 == pts.size()) {
        out.kind = CrossingKind::monotone;
        out.s_star = pts[imin].s;
        out.g = pts[imin].delta;
    } else {
        // The minimum is a zero of dDelta/ds (Hellmann-Feynman); a bracketing
        // root solve pins s* far below the sqrt(eps) limit of a direct
        // minimisation.
        double lo = pts[imin - 1].s;
        double hi = pts[imin + 1].s;
        const auto slope = [&](double s) { return gap_slope_at(model, s); };
        const double f_lo = slope(lo);
        const double f_hi = slope(hi);
        if (f_lo < 0.0 && f_hi > 0.0) {
            std::uintmax_t iterations = 200;
            const auto root = boost::math::tools::toms748_solve(
                slope, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52),
                iterations);
            out.s_star = 0.5 * (root.first + root.second);
        } else {
            const auto best = boost::math::tools::brent_find_minima(
                [&](double s) { return gap_at(model, s); }, lo, hi, 52);
            out.s_star = best.first;
        }
        out.g = gap_at(model, out.s_star);

        // Points where the gap climbs back to 2g on either side.
        const double level = 2.0 * out.g;
        const auto crossing_level = [&](std::size_t inner, std::size_t outer) {
            const double a = std::min(pts[inner].s, pts[outer].s);
            const double b = std::max(pts[inner].s, pts[outer].s);
            std::uintmax_t iterations = 200;
            const auto root = boost::math::tools::toms748_solve(
                [&](double s) { return gap_at(model, s) - level; }, a, b,
                boost::math::tools::eps_tolerance<double>(40), iterations);
            return 0.5 * (root.first + root.second);
        };
        std::optional<double> s_left;
        std::optional<double> s_right;
        for (std::size_t j = imin; j-- > 0;) {
            if (pts[j].delta >= level) {
                s_left = crossing_level(j + 1, j);
                break;
            }
        }
        for (std::size_t j = imin + 1; j < pts.size(); ++j) {
            if (pts[j].delta >= level) {
                s_right = crossing_level(j - 1, j);
                break;
            }
        }

        if (!s_left || !s_right) {
            out.kind = CrossingKind::shallow;
        } else {
            out.kind = CrossingKind::avoided;
            const double w = 0.5 * (*s_right - *s_left);
            out.half_width = w;
            // Landau-Zener hyperbola delta^2 = g^2 + v^2 (s - s*)^2 fitted
            // through the origin on each side of the core (delta <= 2g).
            const auto core_slope = [&](double a, double b) {
                const auto xs = numeric::linspace(a, b, 33);
                double num = 0.0;
                double den = 0.0;
                for (const double x : xs) {
                    const double d = gap_at(model, x);
                    const double u = (x - out.s_star) * (x - out.s_star);
                    num += u * (d * d - out.g * out.g);
                    den += u * u;
                }
                return std::sqrt(std::max(num / den, 0.0));
            };
            out.core_slope_left = core_slope(*s_left, out.s_star);
            out.core_slope_right = core_slope(out.s_star, *s_right);
            out.v = 0.5 * (out.core_slope_left + out.core_slope_right);

            // Straight lines on the outer flanks [s* - 6w, s* - 2w] and
            // [s* + 2w, s* + 6w]; they expose asymmetry beyond the core.
            const auto flank_slope = [&](double a, double b) -> std::optional<double> {
                a = std::clamp(a, 0.0, 1.0);
                b = std::clamp(b, 0.0, 1.0);
                if (b - a < w) {
                    return std::nullopt;
                }
                const auto xs = numeric::linspace(a, b, 33);
                std::vector<double> ys(xs.size());
                for (std::size_t j = 0; j < xs.size(); ++j) {
                    ys[j] = gap_at(model, xs[j]);
                }
                return numeric::fit_line(xs, ys).slope;
            };
            const auto left = flank_slope(out.s_star - 6.0 * w, out.s_star - 2.0 * w);
            const auto right = flank_slope(out.s_star + 2.0 * w, out.s_star + 6.0 * w);
            out.slope_left = left.value_or(0.0);
            out.slope_right = right.value_or(0.0);
            if (!(out.v > 0.0)) {
                out.kind = CrossingKind::shallow;
                out.v = 0.0;
            }
        }
    }

    out.omega_minus = gap_integral(model, 0.0, out.s_star);
    out.omega_plus = gap_integral(model, out.s_star, 1.0);
    out.omega = out.omega_minus + out.omega_plus;
    return out;
}

double nobarrier_gap(double s, double mu) {
    return std::sqrt(1.0 - 2.0 * s + (1.0 + mu) * s * s);
}

double decoupled_qubit_gap(double s, double mu) {
    return std::hypot(1.0 - s, mu * s);
}

double decoupled_qubit_gamma(double s, double mu) {
    return mu / (2.0 * decoupled_qubit_gap(s, mu));
}

std::pair<double, double> rho_endpoints(const GapTrace& trace) {
    if (trace.points.empty()) {
        throw ValidationError("rho_endpoints: empty trace");
    }
    return {trace.points.front().rho, trace.points.back().rho};
}

double adiabatic_time_estimate(const GapTrace& trace) {
    std::vector<double> s;
    std::vector<double> integrand;
    s.reserve(trace.size());
    integrand.reserve(trace.size());
    for (const auto& p : trace.points) {
        s.push_back(p.s);
        integrand.push_back(std::abs(p.gamma) / (p.delta * p.delta));
    }
    return numeric::CubicSpline(std::move(s), std::move(integrand)).integral();
}

void write_trace_csv(std::ostream& out, const GapTrace& trace) {
    using io::format_double;
    out << "s,lambda0,lambda1,delta,gamma,rho\n";
    for (const auto& p : trace.points) {
        out << format_double(p.s) << ',' << format_double(p.lambda0) << ','
            << format_double(p.lambda1) << ',' << format_double(p.delta) << ','
            << format_double(p.gamma) << ',' << format_double(p.rho) << '\n';
    }
}

} // namespace nadyn
