#pragma once

// Fixed-step propagators for i dpsi/ds = tau H(s) psi on banded real
// symmetric paths H(s) = h0 + g(s) (h1 - h0).

#include "nadyn/evolve.hpp"

#include <array>
#include <complex>
#include <vector>

namespace nadyn::detail {

using cplx = std::complex<double>;

// Square matrix stored by diagonals -band..band.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(Eigen::Index dim, Eigen::Index band);
    static BandMatrix from_dense(const Eigen::MatrixXd& m, Eigen::Index band);

    Eigen::Index dim() const { return dim_; }
    Eigen::Index band() const { return band_; }

    cplx& at(Eigen::Index i, Eigen::Index j) { return data_[index(i, j)]; }
    cplx at(Eigen::Index i, Eigen::Index j) const { return data_[index(i, j)]; }

    // out = this * in
    void apply(const StateVector& in, StateVector& out) const;
    // Gershgorin interval of a Hermitian band matrix.
    std::pair<double, double> gershgorin() const;

private:
    std::size_t index(Eigen::Index i, Eigen::Index j) const {
        return static_cast<std::size_t>(i * (2 * band_ + 1) + (j - i + band_));
    }

    Eigen::Index dim_ = 0;
    Eigen::Index band_ = 0;
    std::vector<cplx> data_;
};

// out = exp(-i k) in for Hermitian band matrix k, by Chebyshev expansion on
// the Gershgorin interval.
void apply_exponential(const BandMatrix& k, const StateVector& in, StateVector& out);

class PathPropagator {
public:
    PathPropagator(const ReducedHamiltonian& model, double tau);

    StateVector run(const StateVector& initial, std::int64_t steps, Method method) const;

    // Upper bound on the spectral radius of tau (H(s) - shift) over s in [0, 1].
    double stiffness() const { return tau_ * radius_; }

private:
    void fill_hamiltonian(double g, double scale, BandMatrix& out) const;
    void step_midpoint(double s, double h, StateVector& psi, BandMatrix& work,
                       StateVector& tmp) const;
    void step_magnus4(double s, double h, StateVector& psi, BandMatrix& work,
                      StateVector& tmp) const;
    void step_rk4(double s, double h, StateVector& psi, BandMatrix& work,
                  std::array<StateVector, 5>& tmp) const;

    const ReducedHamiltonian& model_;
    double tau_;
    Eigen::Index band_;
    double shift_ = 0.0;  // constant energy offset removed from H
    double radius_ = 0.0; // Gershgorin radius of H - shift over the path
    Eigen::MatrixXd commutator_; // [h1, h0]
    Eigen::Index commutator_band_ = 0;
};

} // namespace nadyn::detail
