#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmeas/schemes.hpp"

namespace qmeas {

struct Step {
    std::string device;
    Axis axis;
    SchemeKind kind = StandardCollapse{};
};

/// Scripted sequence of measurement events; the classical "server" record is
/// its executed trace. Device labels must be unique across steps.
struct ExperimentScript {
    std::vector<Step> steps;
    BlochVector initial_system{0.5, 0.0, 0.0};
    uint64_t seed = 0;
    int reservoir_size = 2;
    bool dress_reservoirs = false;  // seeded microstate randomization of READY states
};

/// The x, z, x chain with devices x1, z2, x3 and the system prepared along +x.
ExperimentScript canonical_chain(uint64_t seed, int reservoir_size = 2);

/// One z measurement of a +x spin; the canonical anamnesis contrast script.
ExperimentScript single_z_script(uint64_t seed, int reservoir_size = 2);

struct JTriple {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct RecordEntry {
    int time_index = 0;
    std::string device;
    MacroLabel label = MacroLabel::Ready;
    double confidence = 0.0;
};

/// Classical record list, append-only during a run.
struct ServerRecord {
    std::vector<RecordEntry> entries;
    int final_time = 0;
};

struct LedgerRow {
    int step = 0;          // 0 is the initial checkpoint
    std::string device;    // empty on step 0
    std::string outcome;   // empty for unitary steps
    double probability = 1.0;
    JTriple total, system;
    std::vector<std::pair<std::string, JTriple>> devices;
    JTriple delta_total, delta_system;  // vs step 0
    std::vector<std::pair<std::string, JTriple>> delta_devices;
};

/// One exhaustively enumerated collapse branch of a chain. Zero-weight
/// branches are still defined: each collapse formally replaces the system
/// state by the outcome eigenstate. delta_post_prep measures the change
/// accrued after the first (state-preparing) measurement.
struct BranchRow {
    std::vector<OutcomeLabel> outcomes;
    double weight = 0.0;
    JTriple delta_total;      // final vs step 0
    JTriple delta_post_prep;  // final vs after step 1
    std::vector<std::pair<std::string, JTriple>> delta_devices;
};

struct LedgerReport {
    std::string scheme;
    uint64_t seed = 0;
    std::vector<LedgerRow> steps;
    std::vector<BranchRow> branches;  // filled for collapse-scheme chain runs
    double max_abs_delta = 0.0;       // over steps and components, vs step 0
};

/// Executes the script under one scheme on the full joint space, tracking the
/// angular momentum ledger and the classical record.
std::pair<LedgerReport, ServerRecord> run_conservation_chain(const ExperimentScript& script,
                                                             const SchemeKind& scheme,
                                                             SplitMix64& rng);

/// All 2^N collapse branches of the script with exact Born weights.
std::vector<BranchRow> enumerate_chain_branches(const ExperimentScript& script);

std::string branch_key(const std::vector<OutcomeLabel>& outcomes);

struct TrialStepRow {
    uint64_t seed = 0;
    long trial = 0;
    int step = 0;
    std::string device;
    std::string outcome;  // empty for unitary steps, which have no outcome
    double probability = 0.0;
    JTriple delta;  // total angular momentum vs the trial's step 0
};

struct BranchSample {
    std::map<std::string, long> counts;
    long trials = 0;
    std::vector<TrialStepRow> rows;
};

/// Seeded Monte Carlo over collapse branches under StandardCollapse or
/// Instrumentalist (the Unitary scheme never branches). Trial i uses the
/// stream derived from (seed, i), so results are independent of evaluation
/// order. Each step runs on a fresh (system x device) joint; post-collapse
/// products make that exact.
BranchSample sample_chain_branches(const ExperimentScript& script, const SchemeKind& scheme,
                                   long trials, uint64_t seed);

struct AnamnesisCheckpoint {
    int time_index = 0;
    double fidelity = 1.0;         // backward-evolved vs recorded forward state
    bool record_consistent = true; // macrostate matches the server entry
};

struct AnamnesisReport {
    std::string scheme;
    std::vector<AnamnesisCheckpoint> checkpoints;  // time order, one per time index
    ServerRecord record;
    bool fully_consistent = true;       // all fidelities >= 1 - 1e-10 and records match
    int first_mismatch_time = -1;       // scanning backward from t_final; -1 if none
    double first_mismatch_fidelity = 1.0;
};

/// Forward run with per-step checkpoints and records, then backward
/// composition of the inverse step unitaries. Collapse projections have no
/// inverse and are simply absent from the backward pass.
AnamnesisReport run_anamnesis(const ExperimentScript& script, const SchemeKind& scheme);

/// Bloch vector of one reservoir spin's reduced state. After a theta = pi
/// unitary measurement this is the pre-measurement system Bloch vector.
BlochVector recover_bloch_from_reservoir(const StateVector& post, const ApparatusRegister& reg,
                                         int target);

/// Kick-angle and reservoir-preparation lattice for the special-state search.
struct SearchGrid {
    std::vector<double> thetas;
    std::vector<BlochVector> preparations;  // pure target-spin preparations
};

struct SpecialStateResult {
    double theta = 0.0;
    BlochVector preparation;
    double score = 0.0;  // dominant pointer weight after conditioning
    OutcomeLabel outcome = OutcomeLabel::Up;
};

/// Exhaustive grid scan: kick, then unitary pointer conditioning along the
/// observed axis, then definiteness scoring. Returns grid points whose score
/// reaches 1 - tolerance, sorted by descending score.
std::vector<SpecialStateResult> special_state_search(const StateVector& system,
                                                     const Axis& obs_axis, const SearchGrid& grid,
                                                     double tolerance);

struct CauchyKicks {
    double location = 0.0;
    double scale = 0.1;
};

struct UniformKicks {
    double lo = 0.0;
    double hi = 0.0;  // lo == hi is a point mass
};

using KickDistribution = std::variant<CauchyKicks, UniformKicks>;

struct KickStatistics {
    long trials = 0;
    double born_up = 0.0, born_down = 0.0;       // Born weights of the input state
    double freq_up = 0.0, freq_down = 0.0, freq_superposed = 0.0;
};

/// Samples kick angles, runs kick + conditioning + macrostate readout per
/// trial and tabulates outcome frequencies next to the Born weights. Draws no
/// verdict about their relation.
KickStatistics kick_statistics(const StateVector& system, const Axis& obs_axis,
                               const KickDistribution& distribution, long trials, SplitMix64& rng,
                               double readout_tolerance = 0.01);

}  // namespace qmeas
