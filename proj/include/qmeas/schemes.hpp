#pragma once

#include <variant>
#include <vector>

#include "qmeas/apparatus.hpp"

namespace qmeas {

enum class OutcomeLabel { Up, Down, Failed };

const char* to_string(OutcomeLabel label);

struct MeasurementOutcome {
    OutcomeLabel label = OutcomeLabel::Up;
    double probability = 0.0;
    std::string device;
};

/// Collapse scheme: premeasurement unitary followed by Born-rule projection.
struct StandardCollapse {};

/// Fully unitary scheme: a Heisenberg kick, no projection anywhere.
struct Unitary {
    double theta = std::numbers::pi;
    int reservoir_target = 0;
};

/// Detector with a restricted outcome set and declared detection tolerance;
/// eigenvalues outside `allowed` end in the FAILED macrostate.
struct Instrumentalist {
    std::vector<OutcomeLabel> allowed;
    double tolerance = 0.01;
};

using SchemeKind = std::variant<StandardCollapse, Unitary, Instrumentalist>;

const char* scheme_name(const SchemeKind& kind);

/// Premeasurement unitary, Born sample over the joint (system x pointer)
/// branches, projection onto the sampled branch, renormalization. The
/// register's pointer must read READY. The draw consumes one uniform variate:
/// u < P(up branch) selects Up.
std::pair<MeasurementOutcome, StateVector> measure_standard(const StateVector& state,
                                                            const Observable& obs,
                                                            const ApparatusRegister& reg,
                                                            SplitMix64& rng,
                                                            const VonNeumann& model = VonNeumann{});

/// Heisenberg kick only: no projection, no pointer motion. The axis is what
/// the caller intends to measure; the kick itself is rotation invariant, so
/// outcome reading is a separate epistemic act (macrostate after pointer
/// conditioning, or the reservoir-held state).
StateVector measure_unitary(const StateVector& state, const Axis& obs_axis,
                            const ApparatusRegister& reg, const Exchange& model,
                            const std::string& system_label = kSystemLabel);

/// Born sample over all branches; detectable outcomes behave as
/// measure_standard (with the post state checked against the eigenbranch at
/// the declared tolerance), undetectable ones land the pointer on FAILED with
/// the undetected branch as post state.
std::pair<MeasurementOutcome, StateVector> measure_instrumental(
    const StateVector& state, const Observable& obs, const ApparatusRegister& reg,
    const Instrumentalist& scheme, SplitMix64& rng, const VonNeumann& model = VonNeumann{});

/// |<a|b>|^2 on a shared single-spin space.
double born_probability(const StateVector& a, const StateVector& b);

namespace detail {

/// Joint projector onto the (eigenvector i) x (pointer level) branch.
Operator joint_branch_projector(const Observable& obs, Eigen::Index eigen_index,
                                PointerLevel level, const ApparatusRegister& reg);

}  // namespace detail

}  // namespace qmeas
