#pragma once

// Small numerical building blocks shared by the spectrum, evolve and predict
// modules.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nadyn::numeric {

using cplx = std::complex<double>;

// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    // Exact integral of the interpolant over [x_0, x_i] at every node.
    const std::vector<double>& cumulative_integral() const { return cumulative_; }
    double integral() const;
    // Exact integral of the interpolant over [x_0, x]. The end pieces are
    // extended outside the knot range.
    double antiderivative(double x) const;

    std::span<const double> knots() const { return x_; }
    std::span<const double> values() const { return y_; }

private:
    std::size_t interval(double x) const;
    void solve_second_derivatives();

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at the knots
    std::vector<double> cumulative_;
};

// Adaptive Gauss-Kronrod (15 point) integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

// Least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// J_0(r) ... J_{kmax}(r) by Miller's backward recurrence, r >= 0.
std::vector<double> bessel_j_sequence(double r, std::size_t kmax);

// Number of Chebyshev terms for exp(-i r x) on [-1, 1] to reach ~machine
// precision.
std::size_t chebyshev_terms(double r);

// Evenly spaced grid of `count` points on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, std::size_t count);
std::vector<double> logspace(double lo, double hi, std::size_t count);

} // namespace nadyn::numeric
