#include "qmeas/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmeas/linalg.hpp"

namespace qmeas {

namespace {

constexpr double kRecordTolerance = 1e-6;
constexpr long kMaxJointDim = 1L << 22;

void validate_script(const ExperimentScript& script) {
    std::set<std::string> seen;
    for (const auto& s : script.steps) {
        if (!seen.insert(s.device).second) {
            throw ConfigError("device label '" + s.device + "' appears twice in the script");
        }
    }
}

JTriple operator-(const JTriple& a, const JTriple& b) {
    return JTriple{a.x - b.x, a.y - b.y, a.z - b.z};
}

JTriple& operator+=(JTriple& a, const JTriple& b) {
    a.x += b.x;
    a.y += b.y;
    a.z += b.z;
    return a;
}

double max_component(const JTriple& j) {
    return std::max({std::abs(j.x), std::abs(j.y), std::abs(j.z)});
}

JTriple angular_momentum(const StateVector& state, const std::vector<std::string>& spin_labels) {
    JTriple j;
    for (const auto& label : spin_labels) {
        j.x += expectation(state, spin_operator(Axis::x(), label));
        j.y += expectation(state, spin_operator(Axis::y(), label));
        j.z += expectation(state, spin_operator(Axis::z(), label));
    }
    return j;
}

JTriple from_bloch(const BlochVector& b) { return JTriple{b.sx, b.sy, b.sz}; }

struct ChainSetup {
    StateVector joint;
    std::vector<ApparatusRegister> registers;
};

ChainSetup build_chain(const ExperimentScript& script, SplitMix64& rng) {
    validate_script(script);
    StateVector joint = state_from_bloch(script.initial_system, kSystemLabel);
    std::vector<ApparatusRegister> registers;
    registers.reserve(script.steps.size());
    for (const auto& step : script.steps) {
        auto [reg, ready] = script.dress_reservoirs
                                ? prepare_ready(step.device, script.reservoir_size, rng)
                                : prepare_ready(step.device, script.reservoir_size);
        joint = tensor(joint, ready);
        registers.push_back(std::move(reg));
    }
    if (joint.dim() > kMaxJointDim) {
        throw ConfigError("joint space dimension " + std::to_string(joint.dim()) +
                          " exceeds the dense-simulation limit; lower the reservoir size");
    }
    return ChainSetup{std::move(joint), std::move(registers)};
}

LedgerRow make_ledger_row(int step, const StateVector& joint,
                          const std::vector<ApparatusRegister>& registers) {
    LedgerRow row;
    row.step = step;
    row.system = angular_momentum(joint, {kSystemLabel});
    row.total = row.system;
    for (const auto& reg : registers) {
        JTriple dev = angular_momentum(joint, reg.reservoir_labels());
        row.total += dev;
        row.devices.emplace_back(reg.label(), dev);
    }
    return row;
}

void fill_deltas(LedgerRow& row, const LedgerRow& base) {
    row.delta_total = row.total - base.total;
    row.delta_system = row.system - base.system;
    for (std::size_t i = 0; i < row.devices.size(); ++i) {
        row.delta_devices.emplace_back(row.devices[i].first,
                                       row.devices[i].second - base.devices[i].second);
    }
}

SpinSign sign_of(OutcomeLabel label) {
    return label == OutcomeLabel::Up ? SpinSign::Up : SpinSign::Down;
}

}  // namespace

ExperimentScript canonical_chain(uint64_t seed, int reservoir_size) {
    ExperimentScript script;
    script.steps = {Step{"x1", Axis::x(), StandardCollapse{}},
                    Step{"z2", Axis::z(), StandardCollapse{}},
                    Step{"x3", Axis::x(), StandardCollapse{}}};
    script.initial_system = BlochVector{0.5, 0.0, 0.0};
    script.seed = seed;
    script.reservoir_size = reservoir_size;
    return script;
}

ExperimentScript single_z_script(uint64_t seed, int reservoir_size) {
    ExperimentScript script;
    script.steps = {Step{"z1", Axis::z(), StandardCollapse{}}};
    script.initial_system = BlochVector{0.5, 0.0, 0.0};
    script.seed = seed;
    script.reservoir_size = reservoir_size;
    return script;
}

std::string branch_key(const std::vector<OutcomeLabel>& outcomes) {
    std::string key;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (i > 0) {
            key += ",";
        }
        key += to_string(outcomes[i]);
    }
    return key;
}

std::pair<LedgerReport, ServerRecord> run_conservation_chain(const ExperimentScript& script,
                                                             const SchemeKind& scheme,
                                                             SplitMix64& rng) {
    ChainSetup setup = build_chain(script, rng);
    StateVector& joint = setup.joint;

    LedgerReport report;
    report.scheme = scheme_name(scheme);
    report.seed = script.seed;
    ServerRecord record;

    LedgerRow base = make_ledger_row(0, joint, setup.registers);
    fill_deltas(base, base);
    report.steps.push_back(base);

    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const Step& step = script.steps[i];
        const ApparatusRegister& reg = setup.registers[i];
        const Observable obs = spin_operator(step.axis, kSystemLabel);

        std::string outcome_text;
        double probability = 1.0;
        if (const auto* unitary = std::get_if<Unitary>(&scheme)) {
            joint = measure_unitary(joint, step.axis, reg,
                                    Exchange(unitary->theta, unitary->reservoir_target));
        } else if (const auto* instrumental = std::get_if<Instrumentalist>(&scheme)) {
            auto [outcome, post] = measure_instrumental(joint, obs, reg, *instrumental, rng);
            joint = std::move(post);
            outcome_text = to_string(outcome.label);
            probability = outcome.probability;
        } else {
            auto [outcome, post] = measure_standard(joint, obs, reg, rng);
            joint = std::move(post);
            outcome_text = to_string(outcome.label);
            probability = outcome.probability;
        }

        const Macrostate m = macrostate(joint, reg, kRecordTolerance);
        record.entries.push_back(
            RecordEntry{static_cast<int>(i) + 1, reg.label(), m.label, m.confidence});

        LedgerRow row = make_ledger_row(static_cast<int>(i) + 1, joint, setup.registers);
        row.device = step.device;
        row.outcome = outcome_text;
        row.probability = probability;
        fill_deltas(row, report.steps.front());
        report.max_abs_delta = std::max(report.max_abs_delta, max_component(row.delta_total));
        report.steps.push_back(std::move(row));
    }
    record.final_time = static_cast<int>(script.steps.size());

    if (std::holds_alternative<StandardCollapse>(scheme) && !script.steps.empty()) {
        report.branches = enumerate_chain_branches(script);
    }
    return {std::move(report), std::move(record)};
}

std::vector<BranchRow> enumerate_chain_branches(const ExperimentScript& script) {
    validate_script(script);
    const std::size_t n = script.steps.size();
    std::vector<BranchRow> rows;
    if (n == 0) {
        return rows;
    }
    if (n > 16) {
        throw ConfigError("branch enumeration limited to 16 steps");
    }

    std::vector<std::string> device_labels;
    device_labels.reserve(n);
    for (const auto& step : script.steps) {
        device_labels.push_back(step.device);
    }

    const StateVector initial = state_from_bloch(script.initial_system, kSystemLabel);
    const JTriple j0 = from_bloch(bloch_vector(initial));

    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        BranchRow row;
        StateVector psi = initial;
        double weight = 1.0;
        JTriple j1 = j0;
        for (std::size_t i = 0; i < n; ++i) {
            const OutcomeLabel label =
                (mask >> i) & 1 ? OutcomeLabel::Down : OutcomeLabel::Up;
            const StateVector eigen =
                axis_eigenstate(script.steps[i].axis, sign_of(label), kSystemLabel);
            weight *= born_probability(eigen, psi);
            // Textbook collapse: replace the state by the outcome eigenstate.
            // Coincides with project-and-renormalize on every branch of
            // nonzero weight and keeps zero-weight branches well defined.
            psi = eigen;
            if (i == 0) {
                j1 = from_bloch(bloch_vector(psi));
            }
            row.outcomes.push_back(label);
        }
        const JTriple jf = from_bloch(bloch_vector(psi));
        row.weight = weight;
        // Devices never move under collapse bookkeeping: the premeasurement
        // unitary shifts spinless pointer levels and leaves reservoirs alone.
        row.delta_total = jf - j0;
        row.delta_post_prep = jf - j1;
        for (const auto& device : device_labels) {
            row.delta_devices.emplace_back(device, JTriple{});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

BranchSample sample_chain_branches(const ExperimentScript& script, const SchemeKind& scheme,
                                   long trials, uint64_t seed) {
    validate_script(script);
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (std::holds_alternative<Unitary>(scheme)) {
        throw ConfigError("the unitary scheme has no outcome branches to sample");
    }
    const auto* instrumental = std::get_if<Instrumentalist>(&scheme);

    BranchSample sample;
    sample.trials = trials;
    sample.rows.reserve(static_cast<std::size_t>(trials) * script.steps.size());

    for (long t = 0; t < trials; ++t) {
        const uint64_t trial_seed = SplitMix64::derive_seed(seed, static_cast<uint64_t>(t));
        SplitMix64 trial_rng(trial_seed);
        StateVector psi = state_from_bloch(script.initial_system, kSystemLabel);
        const JTriple j0 = from_bloch(bloch_vector(psi));
        std::vector<OutcomeLabel> outcomes;
        outcomes.reserve(script.steps.size());
        for (std::size_t i = 0; i < script.steps.size(); ++i) {
            const Step& step = script.steps[i];
            auto [reg, ready] = prepare_ready(step.device, script.reservoir_size);
            const StateVector joint = tensor(psi, ready);
            const Observable obs = spin_operator(step.axis, kSystemLabel);
            MeasurementOutcome outcome;
            if (instrumental != nullptr) {
                std::tie(outcome, std::ignore) =
                    measure_instrumental(joint, obs, reg, *instrumental, trial_rng);
            } else {
                std::tie(outcome, std::ignore) = measure_standard(joint, obs, reg, trial_rng);
            }
            // Post-collapse the system factor is exactly the sampled
            // eigenstate; carry it alone to the next fresh device. A failed
            // detection leaves the (undetectable) sampled branch in place.
            SpinSign sign = SpinSign::Up;
            if (outcome.label == OutcomeLabel::Failed) {
                const bool up_allowed =
                    std::find(instrumental->allowed.begin(), instrumental->allowed.end(),
                              OutcomeLabel::Up) != instrumental->allowed.end();
                sign = up_allowed ? SpinSign::Down : SpinSign::Up;
            } else {
                sign = sign_of(outcome.label);
            }
            psi = axis_eigenstate(step.axis, sign, kSystemLabel);
            outcomes.push_back(outcome.label);
            sample.rows.push_back(TrialStepRow{trial_seed, t, static_cast<int>(i) + 1,
                                               step.device, to_string(outcome.label),
                                               outcome.probability,
                                               from_bloch(bloch_vector(psi)) - j0});
        }
        ++sample.counts[branch_key(outcomes)];
    }
    return sample;
}

AnamnesisReport run_anamnesis(const ExperimentScript& script, const SchemeKind& scheme) {
    SplitMix64 rng(script.seed);
    ChainSetup setup = build_chain(script, rng);
    StateVector joint = setup.joint;
    const std::size_t n = script.steps.size();

    AnamnesisReport report;
    report.scheme = scheme_name(scheme);
    if (n == 0) {
        return report;
    }

    std::vector<StateVector> checkpoints;
    checkpoints.push_back(joint);
    std::vector<std::vector<Operator>> segments(n);

    for (std::size_t i = 0; i < n; ++i) {
        const Step& step = script.steps[i];
        const ApparatusRegister& reg = setup.registers[i];
        const Observable obs = spin_operator(step.axis, kSystemLabel);

        if (const auto* unitary = std::get_if<Unitary>(&scheme)) {
            const Operator u =
                exchange_unitary(Exchange(unitary->theta, unitary->reservoir_target), reg);
            segments[i].push_back(u);
            joint = apply(u, joint);
        } else if (const auto* instrumental = std::get_if<Instrumentalist>(&scheme)) {
            const Operator u = von_neumann_unitary(obs, VonNeumann{}, reg);
            segments[i].push_back(u);
            auto [outcome, post] = measure_instrumental(joint, obs, reg, *instrumental, rng);
            joint = std::move(post);
            if (outcome.label == OutcomeLabel::Failed) {
                // A failed detection relabeled the sampled (undetectable)
                // level to FAILED; that permutation is part of the step's
                // unitary history. With two eigenvalues the undetectable one
                // is whichever is missing from the allowed set.
                const bool up_allowed =
                    std::find(instrumental->allowed.begin(), instrumental->allowed.end(),
                              OutcomeLabel::Up) != instrumental->allowed.end();
                segments[i].push_back(pointer_level_swap(
                    up_allowed ? PointerLevel::Down : PointerLevel::Up, PointerLevel::Failed,
                    reg));
            }
        } else {
            const Operator u = von_neumann_unitary(obs, VonNeumann{}, reg);
            segments[i].push_back(u);
            auto [outcome, post] = measure_standard(joint, obs, reg, rng);
            joint = std::move(post);
        }

        const Macrostate m = macrostate(joint, reg, kRecordTolerance);
        report.record.entries.push_back(
            RecordEntry{static_cast<int>(i) + 1, reg.label(), m.label, m.confidence});
        checkpoints.push_back(joint);
    }
    report.record.final_time = static_cast<int>(n);

    // Backward pass: undo each step's unitary segments in reverse order.
    StateVector backward = checkpoints.back();
    std::vector<AnamnesisCheckpoint> reversed;
    reversed.push_back(AnamnesisCheckpoint{static_cast<int>(n),
                                           fidelity(backward, checkpoints[n]), true});
    for (std::size_t i = n; i-- > 0;) {
        for (auto it = segments[i].rbegin(); it != segments[i].rend(); ++it) {
            backward = apply(it->adjoint(), backward);
        }
        AnamnesisCheckpoint cp;
        cp.time_index = static_cast<int>(i);
        cp.fidelity = fidelity(backward, checkpoints[i]);
        cp.record_consistent = true;
        if (i >= 1) {
            const ApparatusRegister& reg = setup.registers[i - 1];
            const Macrostate m = macrostate(backward, reg, kRecordTolerance);
            cp.record_consistent = (m.label == report.record.entries[i - 1].label);
        }
        reversed.push_back(cp);
    }
    report.checkpoints.assign(reversed.rbegin(), reversed.rend());

    report.fully_consistent = true;
    for (const auto& cp : report.checkpoints) {
        report.fully_consistent =
            report.fully_consistent && cp.fidelity >= 1.0 - 1e-10 && cp.record_consistent;
    }
    // First mismatch encountered walking backward from t_final.
    for (std::size_t k = report.checkpoints.size(); k-- > 0;) {
        if (report.checkpoints[k].fidelity < 1.0 - 1e-10) {
            report.first_mismatch_time = report.checkpoints[k].time_index;
            report.first_mismatch_fidelity = report.checkpoints[k].fidelity;
            break;
        }
    }
    return report;
}

BlochVector recover_bloch_from_reservoir(const StateVector& post, const ApparatusRegister& reg,
                                         int target) {
    return bloch_vector(partial_trace(post, {reg.reservoir_label(target)}));
}

std::vector<SpecialStateResult> special_state_search(const StateVector& system,
                                                     const Axis& obs_axis, const SearchGrid& grid,
                                                     double tolerance) {
    if (grid.thetas.empty() || grid.preparations.empty()) {
        throw ConfigError("special-state search grid is empty");
    }
    if (!(tolerance >= 0.0 && tolerance < 0.5)) {
        throw ConfigError("search tolerance must lie in [0, 1/2)");
    }
    if (system.dim() != 2) {
        throw SpaceMismatch("special-state search expects a single-spin input");
    }
    const std::string system_label = system.space().factors()[0].label;

    ApparatusRegister reg("dev", 2);
    const StateVector pointer_ready = StateVector::basis_state(
        single_factor(reg.pointer_label(), kPointerDim), static_cast<long>(PointerLevel::Ready));
    const Operator conditioning =
        von_neumann_unitary(spin_operator(obs_axis, system_label), VonNeumann{}, reg);

    std::vector<SpecialStateResult> results;
    for (double theta : grid.thetas) {
        const Operator kick = exchange_kick(theta, reg, 0, system_label);
        for (const auto& prep : grid.preparations) {
            StateVector joint = tensor(
                tensor(system, pointer_ready),
                tensor(state_from_bloch(prep, reg.reservoir_label(0)),
                       state_from_bloch(prep, reg.reservoir_label(1))));
            joint = apply(kick, joint);
            joint = apply(conditioning, joint);
            const auto w = pointer_weights(joint, reg);
            const double score = std::max(w[1], w[2]);
            if (score >= 1.0 - tolerance) {
                results.push_back(SpecialStateResult{
                    theta, prep, score, w[1] >= w[2] ? OutcomeLabel::Up : OutcomeLabel::Down});
            }
        }
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const SpecialStateResult& a, const SpecialStateResult& b) {
                         return a.score > b.score;
                     });
    return results;
}

KickStatistics kick_statistics(const StateVector& system, const Axis& obs_axis,
                               const KickDistribution& distribution, long trials, SplitMix64& rng,
                               double readout_tolerance) {
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (const auto* cauchy = std::get_if<CauchyKicks>(&distribution)) {
        if (!(cauchy->scale > 0.0)) {
            throw ConfigError("Cauchy kick scale must be positive");
        }
    } else {
        const auto& uniform = std::get<UniformKicks>(distribution);
        if (!(uniform.lo <= uniform.hi)) {
            throw ConfigError("uniform kick range needs lo <= hi");
        }
    }
    if (system.dim() != 2) {
        throw SpaceMismatch("kick statistics expects a single-spin input");
    }
    const std::string system_label = system.space().factors()[0].label;

    KickStatistics stats;
    stats.trials = trials;
    stats.born_up = born_probability(axis_eigenstate(obs_axis, SpinSign::Up, system_label), system);
    stats.born_down =
        born_probability(axis_eigenstate(obs_axis, SpinSign::Down, system_label), system);

    auto [reg, ready] = prepare_ready("kick", 2);
    const StateVector base = tensor(system, ready);
    const Operator conditioning =
        von_neumann_unitary(spin_operator(obs_axis, system_label), VonNeumann{}, reg);

    long up = 0, down = 0, superposed = 0;
    for (long t = 0; t < trials; ++t) {
        double theta = 0.0;
        if (const auto* cauchy = std::get_if<CauchyKicks>(&distribution)) {
            theta = rng.cauchy(cauchy->location, cauchy->scale);
        } else {
            const auto& uniform = std::get<UniformKicks>(distribution);
            theta = rng.uniform(uniform.lo, uniform.hi);
        }
        StateVector joint = apply(exchange_kick(theta, reg, 0, system_label), base);
        joint = apply(conditioning, joint);
        const Macrostate m = macrostate(joint, reg, readout_tolerance);
        switch (m.label) {
            case MacroLabel::Up:
                ++up;
                break;
            case MacroLabel::Down:
                ++down;
                break;
            case MacroLabel::Superposed:
                ++superposed;
                break;
            default:
                throw Error("kick readout produced an impossible macrostate");
        }
    }
    stats.freq_up = static_cast<double>(up) / static_cast<double>(trials);
    stats.freq_down = static_cast<double>(down) / static_cast<double>(trials);
    stats.freq_superposed = static_cast<double>(superposed) / static_cast<double>(trials);
    return stats;
}

}  // namespace qmeas
