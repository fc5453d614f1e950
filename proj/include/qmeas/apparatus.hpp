#pragma once

#include <array>
#include <numbers>
#include <utility>
#include <variant>

#include "qmeas/rng.hpp"
#include "qmeas/spin.hpp"

namespace qmeas {

/// Pointer qudit levels. The indices are part of the serialization contract.
enum class PointerLevel : int { Ready = 0, Up = 1, Down = 2, Failed = 3 };

inline constexpr long kPointerDim = 4;

enum class MacroLabel { Ready, Up, Down, Failed, Superposed };

const char* to_string(MacroLabel label);

/// Coarse-grained (classically observable) state of a device: the dominant
/// pointer level, or Superposed when no level dominates. The confidence is
/// the probability weight of the dominant level.
struct Macrostate {
    MacroLabel label = MacroLabel::Ready;
    double confidence = 0.0;
};

/// Measurement device register: one 4-level pointer qudit plus m spin-1/2
/// reservoir factors that carry the device's internal angular momentum.
/// Factor labels are "<label>.ptr" and "<label>.r<i>".
class ApparatusRegister {
public:
    ApparatusRegister(std::string label, int reservoir_size);

    const std::string& label() const { return label_; }
    int reservoir_size() const { return m_; }

    std::string pointer_label() const { return label_ + ".ptr"; }
    std::string reservoir_label(int i) const;
    std::vector<std::string> reservoir_labels() const;

    /// Pointer factor first, then the reservoir spins in order.
    HilbertSpace space() const;

private:
    std::string label_;
    int m_;
};

/// Impulsive pointer coupling with a rectangular pulse g(t): g constant over
/// `duration`, zero outside. Only the product coupling*duration enters the
/// calibration.
struct VonNeumann {
    double coupling = 1.0;
    double duration = 1.0;
};

/// Larmor coupling -mu S.B of the observed spin to a magnetic field.
struct SpinField {
    double mu = 1.0;
    std::array<double, 3> field = {0.0, 0.0, 1.0};
};

/// Heisenberg partial-swap kick between the observed spin and one reservoir
/// spin. theta = pi is a full swap (up to phase); theta = 0 the identity.
class Exchange {
public:
    explicit Exchange(double theta = std::numbers::pi, int reservoir_target = 0);

    double theta() const { return theta_; }
    int reservoir_target() const { return target_; }

private:
    double theta_;
    int target_;
};

using InteractionModel = std::variant<VonNeumann, SpinField, Exchange>;

/// Register with the pointer at READY and the reservoir in a product of
/// singlet pairs, so the total reservoir angular momentum is exactly zero.
std::pair<ApparatusRegister, StateVector> prepare_ready(const std::string& label, int m);

/// As above, plus seeded microstate dressing: each singlet pair is mixed with
/// a random amount of its triplet-zero partner and the whole reservoir gets a
/// random global phase. Every spin-component expectation of each dressed pair
/// vanishes identically, so <J_reservoir> stays (0,0,0) for every seed while
/// different seeds produce fidelity-distinct microstates.
std::pair<ApparatusRegister, StateVector> prepare_ready(const std::string& label, int m,
                                                        SplitMix64& rng);

/// Probability weights of the four pointer levels (reduced over everything
/// else). The state must contain the register's factors.
std::array<double, 4> pointer_weights(const StateVector& state, const ApparatusRegister& reg);

/// Classical reading of the device: the pointer level holding at least
/// 1 - tolerance of the weight, else Superposed. Never inspects reservoir
/// factors. tolerance must lie in (0, 1/2).
Macrostate macrostate(const StateVector& state, const ApparatusRegister& reg, double tolerance);

/// True iff both states carry the same definite macrostate label. Superposed
/// is a diagnostic, not a macrostate: it never compares equivalent.
bool macro_equivalent(const StateVector& a, const StateVector& b, const ApparatusRegister& reg,
                      double tolerance);

/// Calibrated premeasurement unitary on [observable factor, pointer]: the
/// top eigenvalue branch shifts the pointer READY -> UP, the bottom branch
/// READY -> DOWN. Requires |coupling * duration * (eig_max - eig_min)| = 1
/// within 1e-9 (one pointer level per unit of eigenvalue spacing).
Operator von_neumann_unitary(const Observable& obs, const VonNeumann& model,
                             const ApparatusRegister& reg);

/// exp(-i theta S_sys . S_res) on [system spin, target reservoir spin].
/// Commutes with every total angular momentum component.
Operator exchange_unitary(const Exchange& model, const ApparatusRegister& reg,
                          const std::string& system_label = kSystemLabel);

/// Same Heisenberg kick without the model's [0, pi] range restriction, for
/// sampled kick angles (any finite theta).
Operator exchange_kick(double theta, const ApparatusRegister& reg, int reservoir_target,
                       const std::string& system_label = kSystemLabel);

/// Larmor precession of the named spin factor under H = -mu S.B.
StateVector field_evolution(const StateVector& state, const SpinField& model, double duration,
                            const std::string& spin_label = kSystemLabel);

/// Permutation swapping two pointer levels; identity elsewhere.
Operator pointer_level_swap(PointerLevel a, PointerLevel b, const ApparatusRegister& reg);

}  // namespace qmeas
