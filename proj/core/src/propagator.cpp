#include "propagator.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/numeric.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace nadyn::detail {

BandMatrix::BandMatrix(Eigen::Index dim, Eigen::Index band)
    : dim_(dim), band_(band),
      data_(static_cast<std::size_t>(dim * (2 * band + 1)), cplx{0.0, 0.0}) {}

BandMatrix BandMatrix::from_dense(const Eigen::MatrixXd& m, Eigen::Index band) {
    BandMatrix out(m.rows(), band);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band);
        const Eigen::Index hi = std::min<Eigen::Index>(m.rows() - 1, i + band);
        for (Eigen::Index j = lo; j <= hi; ++j) {
            out.at(i, j) = m(i, j);
        }
    }
    return out;
}

void BandMatrix::apply(const StateVector& in, StateVector& out) const {
    out.resize(dim_);
    const Eigen::Index width = 2 * band_ + 1;
    for (Eigen::Index i = 0; i < dim_; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band_);
        const Eigen::Index hi = std::min<Eigen::Index>(dim_ - 1, i + band_);
        const cplx* row = data_.data() + i * width + (band_ - i);
        cplx acc{0.0, 0.0};
        for (Eigen::Index j = lo; j <= hi; ++j) {
            acc += row[j] * in[j];
        }
        out[i] = acc;
    }
}

std::pair<double, double> BandMatrix::gershgorin() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index i = 0; i < dim_; ++i) {
        double radius = 0.0;
        const Eigen::Index first = std::max<Eigen::Index>(0, i - band_);
        const Eigen::Index last = std::min<Eigen::Index>(dim_ - 1, i + band_);
        for (Eigen::Index j = first; j <= last; ++j) {
            if (j != i) {
                radius += std::abs(at(i, j));
            }
        }
        const double centre = at(i, i).real();
        lo = std::min(lo, centre - radius);
        hi = std::max(hi, centre + radius);
    }
    return {lo, hi};
}

void apply_exponential(const BandMatrix& k, const StateVector& in, StateVector& out) {
    const auto [lo, hi] = k.gershgorin();
    const double centre = 0.5 * (lo + hi);
    const double radius = 0.5 * (hi - lo);
    const cplx phase = std::polar(1.0, -centre);
    if (radius < 1e-300) {
        out = phase * in;
        return;
    }

    const auto bessel = numeric::bessel_j_sequence(radius, numeric::chebyshev_terms(radius));
    std::size_t terms = bessel.size();
    while (terms > 1 && std::abs(bessel[terms - 1]) < 1e-18 &&
           static_cast<double>(terms) > radius) {
        --terms;
    }

    // Chebyshev recurrence on the rescaled operator (k - centre) / radius.
    const double inv = 1.0 / radius;
    StateVector prev = in;
    StateVector cur(in.size());
    StateVector next(in.size());
    k.apply(prev, cur);
    cur = (cur - centre * prev) * inv;

    StateVector acc = bessel[0] * prev;
    static constexpr std::array<cplx, 4> minus_i_pow{cplx{1, 0}, cplx{0, -1}, cplx{-1, 0},
                                                     cplx{0, 1}};
    if (terms > 1) {
        acc += 2.0 * minus_i_pow[1] * bessel[1] * cur;
    }
    for (std::size_t n = 2; n < terms; ++n) {
        k.apply(cur, next);
        next = 2.0 * inv * (next - centre * cur) - prev;
        acc += 2.0 * minus_i_pow[n % 4] * bessel[n] * next;
        std::swap(prev, cur);
        std::swap(cur, next);
    }
    out = phase * acc;
}

PathPropagator::PathPropagator(const ReducedHamiltonian& model, double tau)
    : model_(model), tau_(tau), band_(std::max<Eigen::Index>(model.bandwidth, 1)) {
    commutator_ = model.h1 * model.h0 - model.h0 * model.h1;
    for (Eigen::Index j = 0; j < commutator_.cols(); ++j) {
        for (Eigen::Index i = 0; i < commutator_.rows(); ++i) {
            if (commutator_(i, j) != 0.0) {
                commutator_band_ = std::max(commutator_band_, std::abs(i - j));
            }
        }
    }
    // Gershgorin of (1-g) h0 + g h1 is bounded by the endpoint intervals.
    const auto g0 = BandMatrix::from_dense(model.h0, band_).gershgorin();
    const auto g1 = BandMatrix::from_dense(model.h1, band_).gershgorin();
    const double lo = std::min(g0.first, g1.first);
    const double hi = std::max(g0.second, g1.second);
    shift_ = 0.5 * (lo + hi);
    radius_ = 0.5 * (hi - lo);
}

void PathPropagator::fill_hamiltonian(double g, double scale, BandMatrix& out) const {
    const Eigen::Index n = model_.dim();
    const Eigen::Index band = out.band();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band);
        const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + band);
        for (Eigen::Index j = lo; j <= hi; ++j) {
            double value = (1.0 - g) * model_.h0(i, j) + g * model_.h1(i, j);
            if (i == j) {
                value -= shift_;
            }
            out.at(i, j) = scale * value;
        }
    }
}

void PathPropagator::step_midpoint(double s, double h, StateVector& psi, BandMatrix& work,
                                   StateVector& tmp) const {
    fill_hamiltonian(model_.schedule.value(s + 0.5 * h), tau_ * h, work);
    apply_exponential(work, psi, tmp);
    psi.swap(tmp);
}

void PathPropagator::step_magnus4(double s, double h, StateVector& psi, BandMatrix& work,
                                  StateVector& tmp) const {
    static const double offset = std::sqrt(3.0) / 6.0;
    const double g1 = model_.schedule.value(s + h * (0.5 - offset));
    const double g2 = model_.schedule.value(s + h * (0.5 + offset));
    fill_hamiltonian(0.5 * (g1 + g2), tau_ * h, work);
    // Omega = -i tau h Hbar - (sqrt3/12) h^2 tau^2 (g2 - g1) [h1, h0] = -i K.
    const double kappa = std::sqrt(3.0) / 12.0 * h * h * tau_ * tau_ * (g2 - g1);
    const Eigen::Index n = model_.dim();
    const Eigen::Index band = work.band();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = std::max<Eigen::Index>(0, i - band);
        const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + band);
        for (Eigen::Index j = lo; j <= hi; ++j) {
            work.at(i, j) += cplx{0.0, -kappa * commutator_(i, j)};
        }
    }
    apply_exponential(work, psi, tmp);
    psi.swap(tmp);
}

void PathPropagator::step_rk4(double s, double h, StateVector& psi, BandMatrix& work,
                              std::array<StateVector, 5>& tmp) const {
    auto& [k1, k2, k3, k4, stage] = tmp;
    const cplx factor{0.0, -tau_};
    const auto rhs = [&](double at, const StateVector& in, StateVector& out) {
        fill_hamiltonian(model_.schedule.value(at), 1.0, work);
        work.apply(in, out);
        out *= factor;
    };
    rhs(s, psi, k1);
    stage = psi + 0.5 * h * k1;
    rhs(s + 0.5 * h, stage, k2);
    stage = psi + 0.5 * h * k2;
    rhs(s + 0.5 * h, stage, k3);
    stage = psi + h * k3;
    rhs(s + h, stage, k4);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

StateVector PathPropagator::run(const StateVector& initial, std::int64_t steps,
                                Method method) const {
    if (steps < 1) {
        throw ValidationError("propagate: step count must be positive");
    }
    if (initial.size() != model_.dim()) {
        throw ValidationError("propagate: state dimension does not match the model");
    }
    const Eigen::Index n = model_.dim();
    BandMatrix work(n, method == Method::magnus4 ? std::max(band_, commutator_band_) : band_);
    StateVector psi = initial;
    StateVector tmp(n);
    std::array<StateVector, 5> rk_tmp;
    const double h = 1.0 / static_cast<double>(steps);
    for (std::int64_t i = 0; i < steps; ++i) {
        const double s = static_cast<double>(i) * h;
        switch (method) {
        case Method::exponential_midpoint: step_midpoint(s, h, psi, work, tmp); break;
        case Method::magnus4: step_magnus4(s, h, psi, work, tmp); break;
        case Method::high_order_explicit: step_rk4(s, h, psi, work, rk_tmp); break;
        }
    }
    return psi;
}

} // namespace nadyn::detail
