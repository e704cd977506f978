#include "nadyn/model.hpp"

#include "nadyn/errors.hpp"

#include <cmath>
#include <string>

namespace nadyn {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::barrier: return "barrier";
    case ModelKind::cubic: return "cubic";
    case ModelKind::nobarrier: return "nobarrier";
    case ModelKind::grover: return "grover";
    }
    return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "barrier") return ModelKind::barrier;
    if (name == "cubic") return ModelKind::cubic;
    if (name == "nobarrier") return ModelKind::nobarrier;
    if (name == "grover") return ModelKind::grover;
    throw ValidationError("unknown model kind '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    switch (kind) {
    case ModelKind::grover:
        if (big_m < 1 || big_m >= big_n) {
            throw ValidationError("grover model requires 1 <= M < N (got N=" +
                                  std::to_string(big_n) + ", M=" + std::to_string(big_m) + ")");
        }
        return;
    case ModelKind::barrier:
    case ModelKind::nobarrier:
        if (!(mu > 0.0)) {
            throw ValidationError("slope mu must be positive");
        }
        [[fallthrough]];
    case ModelKind::cubic:
        if (n < 1) {
            throw ValidationError("qubit count n must be at least 1");
        }
        break;
    }
    if (kind == ModelKind::barrier) {
        if (!std::isfinite(alpha) || !std::isfinite(beta)) {
            throw ValidationError("barrier exponents must be finite");
        }
        const BarrierShape shape = BarrierShape::from_spec(*this);
        if (shape.center - shape.width / 2 < 0 || shape.center + shape.width / 2 > n) {
            throw ValidationError("barrier support [" +
                                  std::to_string(shape.center - shape.width / 2) + ", " +
                                  std::to_string(shape.center + shape.width / 2) +
                                  "] exceeds [0, " + std::to_string(n) + "]");
        }
    }
}

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double value = 1.0;
    for (int i = 1; i <= k; ++i) {
        value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return value;
}

Eigen::Index band_of(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::Index band = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) != 0.0 || b(i, j) != 0.0) {
                band = std::max(band, std::abs(i - j));
            }
        }
    }
    return band;
}

Eigen::MatrixXd transverse_field(int n) {
    Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int k = 0; k < n; ++k) {
        const double element = 0.5 * std::sqrt(static_cast<double>(k + 1) * (n - k));
        h0(k, k + 1) = element;
        h0(k + 1, k) = element;
    }
    return h0;
}

ReducedHamiltonian qubit_model(const ModelSpec& spec) {
    spec.validate();
    ReducedHamiltonian h;
    h.spec = spec;
    h.h0 = transverse_field(spec.n);
    const auto f = cost_function(spec);
    h.h1 = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()))
               .asDiagonal();
    h.schedule = Schedule::linear();
    h.bandwidth = band_of(h.h0, h.h1);
    return h;
}

void check_unit_interval(double s, const char* where) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw ValidationError(std::string(where) + ": normalized time s=" + std::to_string(s) +
                              " outside [0, 1]");
    }
}

} // namespace

BarrierShape BarrierShape::from_spec(const ModelSpec& spec) {
    BarrierShape shape;
    const double n = static_cast<double>(spec.n);
    shape.width = static_cast<int>(std::ceil(std::pow(n, spec.alpha) - 1e-12));
    shape.width = std::max(shape.width, 1);
    shape.width += shape.width % 2;
    shape.center = static_cast<int>(std::ceil(n / 4.0));
    shape.height = std::pow(n, spec.beta);
    return shape;
}

double BarrierShape::operator()(int k) const {
    const int offset = k - center + width / 2;
    if (offset < 0 || offset > width) {
        return 0.0;
    }
    return height * binomial(width, offset) / binomial(width, width / 2);
}

Schedule Schedule::linear() { return Schedule{}; }

Schedule Schedule::grover(std::int64_t big_n, std::int64_t big_m) {
    if (big_m < 1 || big_m >= big_n) {
        throw ValidationError("grover schedule requires 1 <= M < N");
    }
    Schedule schedule;
    schedule.kind_ = Kind::grover;
    schedule.ratio_ =
        std::sqrt(static_cast<double>(big_n - big_m) / static_cast<double>(big_m));
    schedule.arctan_ratio_ = std::atan(schedule.ratio_);
    return schedule;
}

double Schedule::value(double s) const {
    if (kind_ == Kind::linear) {
        return s;
    }
    if (s == 0.5) {
        return 0.5;
    }
    return 0.5 * (1.0 - std::tan((1.0 - 2.0 * s) * arctan_ratio_) / ratio_);
}

double Schedule::derivative(double s) const {
    if (kind_ == Kind::linear) {
        return 1.0;
    }
    const double c = std::cos((1.0 - 2.0 * s) * arctan_ratio_);
    return arctan_ratio_ / (ratio_ * c * c);
}

std::vector<double> cost_function(const ModelSpec& spec) {
    const int n = spec.n;
    std::vector<double> f(static_cast<std::size_t>(n) + 1, 0.0);
    switch (spec.kind) {
    case ModelKind::nobarrier:
        for (int k = 0; k <= n; ++k) {
            f[k] = spec.mu * k;
        }
        break;
    case ModelKind::barrier: {
        const BarrierShape bump = BarrierShape::from_spec(spec);
        for (int k = 0; k <= n; ++k) {
            f[k] = spec.mu * k + bump(k);
        }
        break;
    }
    case ModelKind::cubic:
        for (int k = 0; k <= n; ++k) {
            const double z = 2.0 * k / static_cast<double>(n) - 1.0;
            f[k] = n * z * z * z;
        }
        break;
    case ModelKind::grover:
        throw ValidationError("cost_function: grover has no Hamming-weight cost");
    }
    return f;
}

ReducedHamiltonian build_barrier_model(const ModelSpec& spec) {
    if (spec.kind != ModelKind::barrier && spec.kind != ModelKind::nobarrier) {
        throw ValidationError("build_barrier_model: spec.kind must be barrier or nobarrier");
    }
    return qubit_model(spec);
}

ReducedHamiltonian build_cubic_model(const ModelSpec& spec) {
    if (spec.kind != ModelKind::cubic) {
        throw ValidationError("build_cubic_model: spec.kind must be cubic");
    }
    return qubit_model(spec);
}

ReducedHamiltonian build_grover_model(const ModelSpec& spec) {
    if (spec.kind != ModelKind::grover) {
        throw ValidationError("build_grover_model: spec.kind must be grover");
    }
    spec.validate();
    const double n = static_cast<double>(spec.big_n);
    const double m = static_cast<double>(spec.big_m);
    Eigen::Vector2d u(std::sqrt(m / n), std::sqrt((n - m) / n));

    ReducedHamiltonian h;
    h.spec = spec;
    h.h0 = -u * u.transpose();
    h.h1 = Eigen::Vector2d(0.0, 1.0).asDiagonal();
    h.schedule = Schedule::grover(spec.big_n, spec.big_m);
    h.bandwidth = 1;
    return h;
}

ReducedHamiltonian build_model(const ModelSpec& spec) {
    switch (spec.kind) {
    case ModelKind::barrier:
    case ModelKind::nobarrier: return build_barrier_model(spec);
    case ModelKind::cubic: return build_cubic_model(spec);
    case ModelKind::grover: return build_grover_model(spec);
    }
    throw ValidationError("build_model: unknown model kind");
}

Eigen::MatrixXd hamiltonian_at(const ReducedHamiltonian& h, double s) {
    check_unit_interval(s, "hamiltonian_at");
    const double g = h.schedule.value(s);
    return (1.0 - g) * h.h0 + g * h.h1;
}

Eigen::MatrixXd dH_ds(const ReducedHamiltonian& h, double s) {
    check_unit_interval(s, "dH_ds");
    return h.schedule.derivative(s) * (h.h1 - h.h0);
}

} // namespace nadyn
