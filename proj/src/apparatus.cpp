#include "qmeas/apparatus.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace qmeas {

namespace {

const Complex kI(0.0, 1.0);

// Singlet projector on two spins, basis order {00, 01, 10, 11}.
Matrix singlet_projector() {
    Matrix p = Matrix::Zero(4, 4);
    p(1, 1) = 0.5;
    p(2, 2) = 0.5;
    p(1, 2) = -0.5;
    p(2, 1) = -0.5;
    return p;
}

// Cyclic pointer shift by `by` levels.
Matrix shift_matrix(int by) {
    Matrix s = Matrix::Zero(kPointerDim, kPointerDim);
    for (long j = 0; j < kPointerDim; ++j) {
        s((j + by) % kPointerDim, j) = 1.0;
    }
    return s;
}

StateVector dressed_pair(const std::string& l0, const std::string& l1, double epsilon,
                         double beta) {
    const double c = std::cos(epsilon) / std::sqrt(2.0);
    const Complex t = std::exp(kI * beta) * std::sin(epsilon) / std::sqrt(2.0);
    Vector v(4);
    v << 0.0, Complex(c, 0.0) + t, Complex(-c, 0.0) + t, 0.0;
    HilbertSpace pair({Factor{l0, 2}, Factor{l1, 2}});
    return StateVector(std::move(pair), std::move(v));
}

}  // namespace

const char* to_string(MacroLabel label) {
    switch (label) {
        case MacroLabel::Ready:
            return "ready";
        case MacroLabel::Up:
            return "up";
        case MacroLabel::Down:
            return "down";
        case MacroLabel::Failed:
            return "failed";
        case MacroLabel::Superposed:
            return "superposed";
    }
    return "?";
}

ApparatusRegister::ApparatusRegister(std::string label, int reservoir_size)
    : label_(std::move(label)), m_(reservoir_size) {
    if (m_ % 2 != 0) {
        throw ReservoirParity("reservoir size must be even, got " + std::to_string(m_));
    }
    if (m_ < 2 || m_ > 8) {
        throw ConfigError("reservoir size must be in {2, 4, 6, 8}, got " + std::to_string(m_));
    }
}

std::string ApparatusRegister::reservoir_label(int i) const {
    if (i < 0 || i >= m_) {
        throw UnknownFactor("reservoir index " + std::to_string(i) + " out of range for m=" +
                            std::to_string(m_));
    }
    return label_ + ".r" + std::to_string(i);
}

std::vector<std::string> ApparatusRegister::reservoir_labels() const {
    std::vector<std::string> ls;
    ls.reserve(m_);
    for (int i = 0; i < m_; ++i) {
        ls.push_back(reservoir_label(i));
    }
    return ls;
}

HilbertSpace ApparatusRegister::space() const {
    std::vector<Factor> fs;
    fs.push_back(Factor{pointer_label(), kPointerDim});
    for (int i = 0; i < m_; ++i) {
        fs.push_back(Factor{reservoir_label(i), 2});
    }
    return HilbertSpace(std::move(fs));
}

Exchange::Exchange(double theta, int reservoir_target) : theta_(theta), target_(reservoir_target) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw ConfigError("exchange theta must lie in [0, pi], got " + std::to_string(theta));
    }
}

std::pair<ApparatusRegister, StateVector> prepare_ready(const std::string& label, int m) {
    ApparatusRegister reg(label, m);
    StateVector state =
        StateVector::basis_state(single_factor(reg.pointer_label(), kPointerDim),
                                 static_cast<long>(PointerLevel::Ready));
    for (int p = 0; p < m / 2; ++p) {
        state = tensor(state, dressed_pair(reg.reservoir_label(2 * p),
                                           reg.reservoir_label(2 * p + 1), 0.0, 0.0));
    }
    return {std::move(reg), std::move(state)};
}

std::pair<ApparatusRegister, StateVector> prepare_ready(const std::string& label, int m,
                                                        SplitMix64& rng) {
    ApparatusRegister reg(label, m);
    StateVector state =
        StateVector::basis_state(single_factor(reg.pointer_label(), kPointerDim),
                                 static_cast<long>(PointerLevel::Ready));
    for (int p = 0; p < m / 2; ++p) {
        const double epsilon = (rng.uniform01() - 0.5) * (std::numbers::pi / 3.0);
        const double beta = rng.uniform01() * 2.0 * std::numbers::pi;
        state = tensor(state, dressed_pair(reg.reservoir_label(2 * p),
                                           reg.reservoir_label(2 * p + 1), epsilon, beta));
    }
    const double gamma = rng.uniform01() * 2.0 * std::numbers::pi;
    return {std::move(reg), StateVector(state.space(), std::exp(kI * gamma) * state.amplitudes())};
}

std::array<double, 4> pointer_weights(const StateVector& state, const ApparatusRegister& reg) {
    const DensityMatrix rho = partial_trace(state, {reg.pointer_label()});
    std::array<double, 4> w{};
    for (long j = 0; j < kPointerDim; ++j) {
        w[j] = rho.matrix()(j, j).real();
    }
    return w;
}

Macrostate macrostate(const StateVector& state, const ApparatusRegister& reg, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 0.5)) {
        throw ConfigError("macrostate tolerance must lie in (0, 1/2)");
    }
    const auto w = pointer_weights(state, reg);
    int best = 0;
    for (int j = 1; j < 4; ++j) {
        if (w[j] > w[best]) {
            best = j;
        }
    }
    static const MacroLabel kLevelLabel[4] = {MacroLabel::Ready, MacroLabel::Up, MacroLabel::Down,
                                              MacroLabel::Failed};
    if (w[best] >= 1.0 - tolerance) {
        return Macrostate{kLevelLabel[best], w[best]};
    }
    return Macrostate{MacroLabel::Superposed, w[best]};
}

bool macro_equivalent(const StateVector& a, const StateVector& b, const ApparatusRegister& reg,
                      double tolerance) {
    const Macrostate ma = macrostate(a, reg, tolerance);
    const Macrostate mb = macrostate(b, reg, tolerance);
    if (ma.label == MacroLabel::Superposed || mb.label == MacroLabel::Superposed) {
        return false;
    }
    return ma.label == mb.label;
}

Operator von_neumann_unitary(const Observable& obs, const VonNeumann& model,
                             const ApparatusRegister& reg) {
    if (obs.space().total_dim() != 2) {
        throw SpaceMismatch("pointer calibration expects a two-level observable");
    }
    if (!(model.duration > 0.0)) {
        throw ConfigError("von Neumann pulse duration must be positive");
    }
    const double spacing = obs.eigenvalues()(1) - obs.eigenvalues()(0);
    const double gt = model.coupling * model.duration;
    if (std::abs(std::abs(gt * spacing) - 1.0) > 1e-9) {
        throw CalibrationError("coupling*duration*spacing = " + std::to_string(gt * spacing) +
                               "; pointer needs exactly one level per unit");
    }
    // One branch per eigenvalue: the top branch shifts the pointer by one
    // level (READY -> UP), the bottom by two (READY -> DOWN). Built
    // spectrally; equals exp(-i (pi/2) (a O + b) P_d) for the calibrated
    // affine map of eigenvalues to shifts.
    const HilbertSpace space =
        HilbertSpace::concat(obs.space(), single_factor(reg.pointer_label(), kPointerDim));
    Matrix u = Matrix::Zero(space.total_dim(), space.total_dim());
    u += Eigen::kroneckerProduct(obs.eigenprojector(1).matrix(), shift_matrix(1)).eval();
    u += Eigen::kroneckerProduct(obs.eigenprojector(0).matrix(), shift_matrix(2)).eval();
    return Operator(space, std::move(u));
}

Operator exchange_kick(double theta, const ApparatusRegister& reg, int reservoir_target,
                       const std::string& system_label) {
    if (!std::isfinite(theta)) {
        throw ConfigError("kick angle must be finite");
    }
    const std::string target_label = reg.reservoir_label(reservoir_target);
    HilbertSpace space({Factor{system_label, 2}, Factor{target_label, 2}});
    const Matrix ps = singlet_projector();
    const Matrix pt = Matrix::Identity(4, 4) - ps;
    // exp(-i theta S.S): S.S = 1/4 on the triplet sector, -3/4 on the singlet.
    Matrix u = std::exp(-kI * theta / 4.0) * pt + std::exp(kI * 3.0 * theta / 4.0) * ps;
    return Operator(std::move(space), std::move(u));
}

Operator exchange_unitary(const Exchange& model, const ApparatusRegister& reg,
                          const std::string& system_label) {
    return exchange_kick(model.theta(), reg, model.reservoir_target(), system_label);
}

StateVector field_evolution(const StateVector& state, const SpinField& model, double duration,
                            const std::string& spin_label) {
    for (double b : model.field) {
        if (!std::isfinite(b)) {
            throw ConfigError("magnetic field components must be finite");
        }
    }
    Matrix h(2, 2);
    const auto& b = model.field;
    h << Complex(b[2], 0.0), Complex(b[0], -b[1]), Complex(b[0], b[1]), Complex(-b[2], 0.0);
    h *= -0.5 * model.mu;  // -mu S.B with S = sigma/2
    return evolve(state, Operator(single_factor(spin_label, 2), std::move(h)), duration);
}

Operator pointer_level_swap(PointerLevel a, PointerLevel b, const ApparatusRegister& reg) {
    Matrix m = Matrix::Identity(kPointerDim, kPointerDim);
    const long ia = static_cast<long>(a);
    const long ib = static_cast<long>(b);
    m(ia, ia) = 0.0;
    m(ib, ib) = 0.0;
    m(ia, ib) = 1.0;
    m(ib, ia) = 1.0;
    return Operator(single_factor(reg.pointer_label(), kPointerDim), std::move(m));
}

}  // namespace qmeas
