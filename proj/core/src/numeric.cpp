#include "nadyn/numeric.hpp"

#include "nadyn/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nadyn::numeric {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw ValidationError("CubicSpline: need at least two matching knots");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(x_[i] > x_[i - 1])) {
            throw ValidationError("CubicSpline: knots must be strictly increasing");
        }
    }
    m_.assign(n, 0.0);
    if (n > 2) {
        solve_second_derivatives();
    }
    cumulative_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x_[i + 1] - x_[i];
        cumulative_[i + 1] = cumulative_[i] + 0.5 * h * (y_[i] + y_[i + 1]) -
                             h * h * h * (m_[i] + m_[i + 1]) / 24.0;
    }
}

void CubicSpline::solve_second_derivatives() {
    const std::size_t n = x_.size();
    // Tridiagonal system for the interior second derivatives (Thomas algorithm).
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double a = h0 / 6.0;
        const double b = (h0 + h1) / 3.0;
        const double cc = h1 / 6.0;
        const double rhs = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = d[i] - c[i] * m_[i + 1];
    }
}

std::size_t CubicSpline::interval(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const auto idx = static_cast<std::ptrdiff_t>(it - x_.begin()) - 1;
    return static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(x_.size()) - 2));
}

double CubicSpline::operator()(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
           (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
}

double CubicSpline::antiderivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double u = 1.0 - t;
    const double linear = (t - 0.5 * t * t) * y_[i] + 0.5 * t * t * y_[i + 1];
    const double curved = (-0.25 * u * u * u * u + 0.5 * u * u - 0.25) * m_[i] +
                          (0.25 * t * t * t * t - 0.5 * t * t) * m_[i + 1];
    return cumulative_[i] + h * linear + h * h * h * curved / 6.0;
}

double CubicSpline::integral() const { return cumulative_.back(); }

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (a == b) {
        return 0.0;
    }
    double error = 0.0;
    const double scale = std::max(1.0, std::abs(b - a));
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 30, abs_tol / scale, &error);
    if (!std::isfinite(value) || error > std::max(abs_tol, 1e3 * abs_tol * std::abs(value))) {
        throw NumericalError("integrate: adaptive quadrature did not converge (error estimate " +
                             std::to_string(error) + ")");
    }
    return value;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) {
        throw ValidationError("fit_line: need at least two matching points");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) {
        throw ValidationError("fit_line: abscissae are all equal");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

std::vector<double> bessel_j_sequence(double r, std::size_t kmax) {
    std::vector<double> j(kmax + 1, 0.0);
    if (r == 0.0) {
        j[0] = 1.0;
        return j;
    }
    if (r < 0.0) {
        throw ValidationError("bessel_j_sequence: argument must be non-negative");
    }
    const double top = std::max(static_cast<double>(kmax), r);
    std::size_t start = static_cast<std::size_t>(top + 16.0 + 4.0 * std::sqrt(top + 40.0));
    start += start % 2; // even start keeps the normalisation sum aligned
    double next = 0.0;
    double current = 1e-300;
    double norm = 0.0;
    for (std::size_t k = start; k-- > 0;) {
        // J_k = (2(k+1)/r) J_{k+1} - J_{k+2}
        const double value = 2.0 * static_cast<double>(k + 1) / r * current - next;
        next = current;
        current = value;
        if (k <= kmax) {
            j[k] = current;
        }
        if (k % 2 == 0) {
            norm += (k == 0 ? 1.0 : 2.0) * current;
        }
        if (std::abs(current) > 1e250) {
            const double rescale = 1e-250;
            current *= rescale;
            next *= rescale;
            norm *= rescale;
            for (std::size_t i = k; i <= kmax && i < j.size(); ++i) {
                j[i] *= rescale;
            }
        }
    }
    for (double& v : j) {
        v /= norm;
    }
    return j;
}

std::size_t chebyshev_terms(double r) {
    return static_cast<std::size_t>(std::ceil(r + 10.0 * std::cbrt(r) + 30.0));
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        return {};
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > 0.0)) {
        throw ValidationError("logspace: bounds must be positive");
    }
    auto out = linspace(std::log(lo), std::log(hi), count);
    for (double& v : out) {
        v = std::exp(v);
    }
    if (!out.empty()) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

} // namespace nadyn::numeric
