#pragma once

// Reduced-basis Hamiltonian paths H(s) = (1 - g(s)) H0 + g(s) H1.
//
// Qubit models (barrier, cubic, nobarrier) live on the (n+1)-dimensional
// symmetric subspace spanned by Hamming-weight states |k>, k = 0..n, with
//   H0 = 1/2 sum_i sigma_x^(i)        (tridiagonal, <k|H0|k+1> = sqrt((k+1)(n-k))/2)
//   H1 = diag(f(k))                   (cost function of the Hamming weight)
// and the identity schedule g(s) = s.
//
// The Grover model lives on the two-dimensional invariant subspace
// {uniform superposition of targets, uniform superposition of non-targets}
// and uses the locally adiabatic schedule that slows down where the gap
// closes.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nadyn {

enum class ModelKind { barrier, cubic, nobarrier, grover };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct ModelSpec {
    ModelKind kind = ModelKind::nobarrier;
    int n = 1;            // qubit count (qubit models)
    double mu = 1.0;      // slope of the linear cost term (barrier, nobarrier)
    double alpha = 0.0;   // barrier width exponent: width ~ n^alpha
    double beta = 0.0;    // barrier height exponent: height = n^beta
    std::int64_t big_n = 0; // Grover search-space size
    std::int64_t big_m = 0; // Grover target count

    // Throws ValidationError when the invariants of `kind` are violated.
    void validate() const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// Binomial bump b(k) = height * C(width, k - center + width/2) / C(width, width/2)
// on |k - center| <= width/2, zero elsewhere. Peak value is exactly `height`.
struct BarrierShape {
    int center = 0;
    int width = 0; // always even
    double height = 0.0;

    static BarrierShape from_spec(const ModelSpec& spec);
    double operator()(int k) const;
};

// Interpolation schedule g(s) with analytic derivative.
class Schedule {
public:
    static Schedule linear();
    static Schedule grover(std::int64_t big_n, std::int64_t big_m);

    double value(double s) const;
    double derivative(double s) const;
    bool is_linear() const { return kind_ == Kind::linear; }

private:
    enum class Kind { linear, grover };
    Kind kind_ = Kind::linear;
    double arctan_ratio_ = 0.0; // atan(sqrt((N - M) / M))
    double ratio_ = 0.0;        // sqrt((N - M) / M)
};

struct ReducedHamiltonian {
    ModelSpec spec;
    Eigen::MatrixXd h0;
    Eigen::MatrixXd h1;
    Schedule schedule = Schedule::linear();
    // Largest |i - j| with a non-zero entry in h0 or h1; 1 for qubit models.
    Eigen::Index bandwidth = 0;

    Eigen::Index dim() const { return h0.rows(); }
    bool tridiagonal() const { return bandwidth <= 1; }
};

// Cost function f(k) on Hamming weights for the qubit models.
std::vector<double> cost_function(const ModelSpec& spec);

ReducedHamiltonian build_barrier_model(const ModelSpec& spec);
ReducedHamiltonian build_cubic_model(const ModelSpec& spec);
ReducedHamiltonian build_grover_model(const ModelSpec& spec);
// Dispatches on spec.kind. The nobarrier kind is the barrier model with b = 0.
ReducedHamiltonian build_model(const ModelSpec& spec);

// (1 - g(s)) h0 + g(s) h1; rejects s outside [0, 1].
Eigen::MatrixXd hamiltonian_at(const ReducedHamiltonian& h, double s);
// g'(s) (h1 - h0).
Eigen::MatrixXd dH_ds(const ReducedHamiltonian& h, double s);

} // namespace nadyn
