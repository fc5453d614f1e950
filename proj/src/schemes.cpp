#include "qmeas/schemes.hpp"

#include <algorithm>

#include <unsupported/Eigen/KroneckerProduct>

#include "qmeas/linalg.hpp"

namespace qmeas {

namespace {

constexpr double kReadyCheckTolerance = 1e-9;

PointerLevel level_for(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::Up:
            return PointerLevel::Up;
        case OutcomeLabel::Down:
            return PointerLevel::Down;
        case OutcomeLabel::Failed:
            return PointerLevel::Failed;
    }
    return PointerLevel::Failed;
}

// Raw (unnormalized) branch amplitudes plus their weight.
std::pair<Vector, double> project_branch(const StateVector& state, const Operator& projector) {
    const auto targets = detail::locate_factors(projector.space(), state.space());
    Vector raw = qmeas::detail::apply_on_factors(projector.matrix(), state.amplitudes(),
                                                 state.space(), targets);
    const double weight = raw.squaredNorm();
    return {std::move(raw), weight};
}

void require_ready(const StateVector& state, const ApparatusRegister& reg) {
    const Macrostate m = macrostate(state, reg, kReadyCheckTolerance);
    if (m.label != MacroLabel::Ready) {
        throw DeviceNotReady("device '" + reg.label() + "' pointer is not at READY (reads " +
                             std::string(to_string(m.label)) + ")");
    }
}

}  // namespace

const char* to_string(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::Up:
            return "up";
        case OutcomeLabel::Down:
            return "down";
        case OutcomeLabel::Failed:
            return "failed";
    }
    return "?";
}

const char* scheme_name(const SchemeKind& kind) {
    if (std::holds_alternative<StandardCollapse>(kind)) {
        return "standard";
    }
    if (std::holds_alternative<Unitary>(kind)) {
        return "unitary";
    }
    return "instrumental";
}

namespace detail {

Operator joint_branch_projector(const Observable& obs, Eigen::Index eigen_index,
                                PointerLevel level, const ApparatusRegister& reg) {
    const HilbertSpace space =
        HilbertSpace::concat(obs.space(), single_factor(reg.pointer_label(), kPointerDim));
    Matrix pointer = Matrix::Zero(kPointerDim, kPointerDim);
    pointer(static_cast<long>(level), static_cast<long>(level)) = 1.0;
    Matrix m = Eigen::kroneckerProduct(obs.eigenprojector(eigen_index).matrix(), pointer);
    return Operator(space, std::move(m));
}

}  // namespace detail

std::pair<MeasurementOutcome, StateVector> measure_standard(const StateVector& state,
                                                            const Observable& obs,
                                                            const ApparatusRegister& reg,
                                                            SplitMix64& rng,
                                                            const VonNeumann& model) {
    require_ready(state, reg);
    const Operator u = von_neumann_unitary(obs, model, reg);
    const StateVector premeasured = apply(u, state);

    // Eigenvalues are sorted ascending: index 1 is the UP branch.
    auto [raw_up, w_up] =
        project_branch(premeasured, detail::joint_branch_projector(obs, 1, PointerLevel::Up, reg));
    auto [raw_down, w_down] = project_branch(
        premeasured, detail::joint_branch_projector(obs, 0, PointerLevel::Down, reg));

    const bool up = rng.uniform01() < w_up;
    MeasurementOutcome outcome{up ? OutcomeLabel::Up : OutcomeLabel::Down, up ? w_up : w_down,
                               reg.label()};
    StateVector post(premeasured.space(), up ? std::move(raw_up) : std::move(raw_down));
    return {outcome, std::move(post)};
}

StateVector measure_unitary(const StateVector& state, const Axis& obs_axis,
                            const ApparatusRegister& reg, const Exchange& model,
                            const std::string& system_label) {
    (void)obs_axis;  // the Heisenberg kick is rotation invariant
    return apply(exchange_unitary(model, reg, system_label), state);
}

std::pair<MeasurementOutcome, StateVector> measure_instrumental(
    const StateVector& state, const Observable& obs, const ApparatusRegister& reg,
    const Instrumentalist& scheme, SplitMix64& rng, const VonNeumann& model) {
    if (scheme.allowed.empty()) {
        throw ConfigError("instrumentalist scheme needs a nonempty set of detectable outcomes");
    }
    if (!(scheme.tolerance > 0.0 && scheme.tolerance < 0.5)) {
        throw ConfigError("detection tolerance must lie in (0, 1/2)");
    }
    require_ready(state, reg);
    const Operator u = von_neumann_unitary(obs, model, reg);
    const StateVector premeasured = apply(u, state);

    auto [raw_up, w_up] =
        project_branch(premeasured, detail::joint_branch_projector(obs, 1, PointerLevel::Up, reg));
    auto [raw_down, w_down] = project_branch(
        premeasured, detail::joint_branch_projector(obs, 0, PointerLevel::Down, reg));

    const bool up = rng.uniform01() < w_up;
    const OutcomeLabel sampled = up ? OutcomeLabel::Up : OutcomeLabel::Down;
    const double weight = up ? w_up : w_down;
    StateVector post(premeasured.space(), up ? std::move(raw_up) : std::move(raw_down));

    const bool detectable =
        std::find(scheme.allowed.begin(), scheme.allowed.end(), sampled) != scheme.allowed.end();
    if (detectable) {
        // Item check: the detected branch must be an eigenbranch within the
        // declared tolerance. Exact here; guards future interaction models.
        const double eigen_weight = expectation(post, obs.eigenprojector(up ? 1 : 0));
        if (eigen_weight < 1.0 - scheme.tolerance) {
            throw Error("detected branch misses its eigenstate beyond tolerance");
        }
        return {MeasurementOutcome{sampled, weight, reg.label()}, std::move(post)};
    }

    // Undetectable eigenvalue: the device lands on FAILED, the system keeps
    // the undetected branch.
    const StateVector failed_post =
        apply(pointer_level_swap(level_for(sampled), PointerLevel::Failed, reg), post);
    return {MeasurementOutcome{OutcomeLabel::Failed, weight, reg.label()}, failed_post};
}

double born_probability(const StateVector& a, const StateVector& b) {
    if (a.space() != b.space()) {
        throw SpaceMismatch("born_probability requires a shared space");
    }
    if (a.dim() != 2) {
        throw SpaceMismatch("born_probability is defined on single-spin states");
    }
    return fidelity(a, b);
}

}  // namespace qmeas
