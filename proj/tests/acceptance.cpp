// Acceptance suite: one criterion per case, one PASS/FAIL line per criterion,
// every tolerance pinned in code. Exits with the number of failed criteria.
// argv[1] (optional) is the CLI binary for the determinism criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

#include "qmeas/experiments.hpp"
#include "qmeas/linalg.hpp"
#include "util.hpp"

namespace fs = std::filesystem;
using namespace qmeas;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<void()> body;  // throws std::runtime_error on failure
    long max_ms = 0;             // 0 = no runtime bound
};

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw std::runtime_error(what);
    }
}

std::string g_cli;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return in ? ss.str() : "<unreadable:" + path.string() + ">";
}

double max_abs(const JTriple& j) {
    return std::max({std::abs(j.x), std::abs(j.y), std::abs(j.z)});
}

StateVector fresh_joint(const StateVector& system, ApparatusRegister& reg_out) {
    auto [reg, ready] = prepare_ready("d", 2);
    reg_out = reg;
    return tensor(system, ready);
}

// How much of the post state's system factor overlaps a pure target state.
double system_overlap(const StateVector& post, const StateVector& target) {
    const DensityMatrix rho = partial_trace(post, {kSystemLabel});
    const Vector t = target.amplitudes();
    return (t.adjoint() * rho.matrix() * t)(0).real();
}

// --- criterion bodies -------------------------------------------------------

void criterion_eigenstate_measurement() {
    const StateVector up_z = axis_eigenstate(Axis::z(), SpinSign::Up);
    const Observable sz = spin_operator(Axis::z());

    // Standard collapse.
    {
        ApparatusRegister reg("d", 2);
        SplitMix64 rng(1);
        auto [outcome, post] = measure_standard(fresh_joint(up_z, reg), sz, reg, rng);
        require(outcome.label == OutcomeLabel::Up, "standard: outcome must be Up");
        require(std::abs(outcome.probability - 1.0) <= 1e-12,
                "standard: P(Up) must be 1 within 1e-12");
        require(system_overlap(post, up_z) >= 1.0 - 1e-12,
                "standard: post-state fidelity with the input must be 1 within 1e-12");
    }
    // Instrumentalist with full coverage.
    {
        ApparatusRegister reg("d", 2);
        SplitMix64 rng(2);
        auto [outcome, post] =
            measure_instrumental(fresh_joint(up_z, reg), sz, reg,
                                 Instrumentalist{{OutcomeLabel::Up, OutcomeLabel::Down}, 0.01},
                                 rng);
        require(outcome.label == OutcomeLabel::Up, "instrumental: outcome must be Up");
        require(std::abs(outcome.probability - 1.0) <= 1e-12,
                "instrumental: P(Up) must be 1 within 1e-12");
        require(system_overlap(post, up_z) >= 1.0 - 1e-12,
                "instrumental: post-state fidelity must be 1 within 1e-12");
    }
    // Unitary scheme: the eigenstate's special kick is theta = 0; the pointer
    // write-out itself is unitary.
    {
        ApparatusRegister reg("d", 2);
        StateVector joint = fresh_joint(up_z, reg);
        joint = measure_unitary(joint, Axis::z(), reg, Exchange(0.0, 0));
        joint = apply(von_neumann_unitary(sz, VonNeumann{}, reg), joint);
        const Macrostate m = macrostate(joint, reg, 1e-9);
        require(m.label == MacroLabel::Up, "unitary: macrostate must read Up");
        require(m.confidence >= 1.0 - 1e-12, "unitary: P(Up) must be 1 within 1e-12");
        require(system_overlap(joint, up_z) >= 1.0 - 1e-12,
                "unitary: post-state fidelity must be 1 within 1e-12");
    }
}

void criterion_equal_splitting() {
    const StateVector up_x = axis_eigenstate(Axis::x(), SpinSign::Up);
    const Observable sz = spin_operator(Axis::z());

    // Analytic Born weights, both routes.
    const double w_up = born_probability(axis_eigenstate(Axis::z(), SpinSign::Up), up_x);
    const double w_down = born_probability(axis_eigenstate(Axis::z(), SpinSign::Down), up_x);
    require(std::abs(w_up - 0.5) <= 1e-12, "analytic P(up) must equal 0.5 within 1e-12");
    require(std::abs(w_down - 0.5) <= 1e-12, "analytic P(down) must equal 0.5 within 1e-12");

    const long trials = 10000;
    long ups = 0;
    for (long t = 0; t < trials; ++t) {
        SplitMix64 rng = SplitMix64::derive(2001, static_cast<uint64_t>(t));
        ApparatusRegister reg("d", 2);
        auto [outcome, post] = measure_standard(fresh_joint(up_x, reg), sz, reg, rng);
        require(std::abs(outcome.probability - 0.5) <= 1e-12,
                "sampled branch weight must equal 0.5 within 1e-12");
        ups += outcome.label == OutcomeLabel::Up ? 1 : 0;
    }
    const double freq = static_cast<double>(ups) / trials;
    const double bound = 4.0 * std::sqrt(0.5 * 0.5 / trials);
    require(std::abs(freq - 0.5) <= bound,
            "empirical frequency " + std::to_string(freq) + " outside 4 sigma of 0.5");
}

void criterion_quarter_branch() {
    const auto branches = enumerate_chain_branches(canonical_chain(0));
    double weight = -1.0;
    for (const auto& row : branches) {
        if (branch_key(row.outcomes) == "up,up,down") {
            weight = row.weight;
        }
    }
    require(std::abs(weight - 0.25) <= 1e-12, "exact branch weight must be 0.25 within 1e-12");

    const long trials = 10000;
    const BranchSample sample =
        sample_chain_branches(canonical_chain(0), StandardCollapse{}, trials, 3001);
    const auto it = sample.counts.find("up,up,down");
    const double freq =
        it == sample.counts.end() ? 0.0
                                  : static_cast<double>(it->second) / static_cast<double>(trials);
    const double bound = 4.0 * std::sqrt(0.25 * 0.75 / trials);
    require(std::abs(freq - 0.25) <= bound,
            "empirical branch frequency " + std::to_string(freq) + " outside 4 sigma of 0.25");
}

void criterion_collapse_violates_conservation() {
    const auto branches = enumerate_chain_branches(canonical_chain(0));
    int flips_checked = 0;
    for (const auto& row : branches) {
        const std::string key = branch_key(row.outcomes);
        if (key == "up,up,down" || key == "up,down,down") {
            require(std::abs(std::abs(row.delta_total.x) - 1.0) <= 1e-12,
                    "flip branch " + key + " must carry |dJx| = 1 exactly");
            ++flips_checked;
        }
        for (const auto& [device, delta] : row.delta_devices) {
            require(max_abs(delta) <= 1e-12,
                    "device " + device + " must show zero compensating change");
        }
    }
    require(flips_checked == 2, "both spin-flip branches must be present");
}

void criterion_unitary_conserves() {
    // Operator-level backing: the kick commutes with every J component.
    ApparatusRegister reg("d", 2);
    const HilbertSpace joint_space =
        HilbertSpace::concat(single_factor(kSystemLabel, 2), reg.space());
    const std::vector<std::string> spins{kSystemLabel, reg.reservoir_label(0),
                                         reg.reservoir_label(1)};
    for (int k = 0; k < 20; ++k) {
        const double theta = (k + 1) * std::numbers::pi / 20.0;
        const Operator u = embed(exchange_unitary(Exchange(theta, 0), reg), joint_space);
        for (const Axis& axis : {Axis::x(), Axis::y(), Axis::z()}) {
            Operator total(joint_space,
                           Matrix::Zero(joint_space.total_dim(), joint_space.total_dim()));
            for (const auto& label : spins) {
                total = total + embed(spin_operator(axis, label).op(), joint_space);
            }
            require(commutator_norm(u, total) <= 1e-12,
                    "[exchange, J] must vanish within 1e-12");
        }
    }

    // State-level sweep over 100 random seeds.
    for (uint64_t seed = 0; seed < 100; ++seed) {
        SplitMix64 rng(seed);
        ExperimentScript script = canonical_chain(seed);
        script.initial_system = qtest::random_bloch(rng);
        script.dress_reservoirs = true;
        auto [report, record] = run_conservation_chain(script, Unitary{}, rng);
        require(report.max_abs_delta <= 1e-10,
                "unitary chain delta " + std::to_string(report.max_abs_delta) +
                    " exceeds 1e-10 at seed " + std::to_string(seed));
    }
}

void criterion_anamnesis() {
    const AnamnesisReport unitary = run_anamnesis(canonical_chain(42), Unitary{});
    require(unitary.fully_consistent, "unitary anamnesis must be fully consistent");
    for (const auto& cp : unitary.checkpoints) {
        require(cp.fidelity >= 1.0 - 1e-10, "unitary checkpoint fidelity below 1 - 1e-10");
        require(cp.record_consistent, "unitary checkpoint record mismatch");
    }

    const AnamnesisReport collapse = run_anamnesis(single_z_script(42), StandardCollapse{});
    require(collapse.first_mismatch_time == 0,
            "collapse mismatch must sit at the pre-measurement checkpoint");
    require(std::abs(collapse.first_mismatch_fidelity - 0.5) <= 1e-10,
            "collapse reconstruction fidelity must be 0.5 within 1e-10");
}

void criterion_information_retention() {
    SplitMix64 rng(7007);
    bool collapse_differs_somewhere = false;
    for (int k = 0; k < 100; ++k) {
        const BlochVector input = qtest::random_bloch(rng);
        const StateVector psi = state_from_bloch(input);

        ApparatusRegister reg_u("d", 2);
        const StateVector unitary_post = measure_unitary(
            fresh_joint(psi, reg_u), Axis::z(), reg_u, Exchange(std::numbers::pi, 0));
        const BlochVector kept = recover_bloch_from_reservoir(unitary_post, reg_u, 0);
        require(std::abs(kept.sx - input.sx) <= 1e-10 &&
                    std::abs(kept.sy - input.sy) <= 1e-10 &&
                    std::abs(kept.sz - input.sz) <= 1e-10,
                "unitary recovery must match the input within 1e-10 per component");

        ApparatusRegister reg_c("d", 2);
        SplitMix64 draw = rng.split();
        auto [outcome, collapsed] = measure_standard(fresh_joint(psi, reg_c),
                                                     spin_operator(Axis::z()), reg_c, draw);
        const BlochVector lost = recover_bloch_from_reservoir(collapsed, reg_c, 0);
        if (std::abs(lost.sx - input.sx) > 0.1 || std::abs(lost.sy - input.sy) > 0.1 ||
            std::abs(lost.sz - input.sz) > 0.1) {
            collapse_differs_somewhere = true;
        }
    }
    require(collapse_differs_somewhere,
            "collapse must lose at least one input by > 0.1 in some component");
}

void criterion_macrostate_equivalence() {
    SplitMix64 rng(8008);
    const Observable sz = spin_operator(Axis::z());
    int cases = 0;
    while (cases < 200) {
        // Two dressed microstates of the same device.
        SplitMix64 seed_a = rng.split();
        SplitMix64 seed_b = rng.split();
        auto [reg, state_a] = prepare_ready("d", 2, seed_a);
        auto [reg_b, state_b] = prepare_ready("d", 2, seed_b);

        // Same pointer label on distinct microstates: equivalent.
        require(macro_equivalent(state_a, state_b, reg, 0.01),
                "distinct microstates under the same pointer must be equivalent");

        // Move one pointer: never equivalent to the other label.
        const StateVector up_a =
            apply(pointer_level_swap(PointerLevel::Ready, PointerLevel::Up, reg), state_a);
        const StateVector down_b =
            apply(pointer_level_swap(PointerLevel::Ready, PointerLevel::Down, reg), state_b);
        require(!macro_equivalent(up_a, down_b, reg, 0.01),
                "different pointer labels must never be equivalent");

        // Reservoir-only unitaries leave the label alone.
        StateVector kicked = up_a;
        for (const auto& label : reg.reservoir_labels()) {
            kicked = apply(propagator(qtest::random_hermitian(single_factor(label, 2), rng),
                                      rng.uniform(0.0, 3.0)),
                           kicked);
        }
        require(macrostate(kicked, reg, 0.01).label == macrostate(up_a, reg, 0.01).label,
                "reservoir-only unitaries must not change the macrostate label");
        ++cases;
    }
}

void criterion_cli_determinism() {
    require(!g_cli.empty(), "CLI path missing: pass it as argv[1]");
    const fs::path tmp = fs::temp_directory_path() / "qmeas_acceptance_cli";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
        {"conservation --scheme standard --seed 11 --trials 2000",
         {"conservation_report.json", "conservation_trials.csv",
          "conservation_outcomes.jsonl"}},
        {"conservation --scheme unitary --seed 11 --trials 5",
         {"conservation_report.json", "conservation_trials.csv"}},
        {"anamnesis --scheme standard --seed 11", {"anamnesis_report.json"}},
        {"special-search --seed 11 --distribution cauchy --scale 0.1 --trials 2000",
         {"special_report.json", "special_results.csv", "kick_stats.csv"}},
        {"born-check --seed 11 --trials 500", {"born_check.json", "born_check.csv"}},
    };
    for (const auto& [args, files] : runs) {
        const std::string full = args + " --out " + tmp.string();
        require(run_cli(full) == 0, "CLI run failed: " + args);
        std::map<std::string, std::string> snapshot;
        for (const auto& f : files) {
            snapshot[f] = slurp(tmp / f);
        }
        require(run_cli(full) == 0, "CLI rerun failed: " + args);
        for (const auto& f : files) {
            require(slurp(tmp / f) == snapshot[f],
                    "file differs between identical runs: " + f + " (" + args + ")");
        }
    }
    fs::remove_all(tmp);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        g_cli = argv[1];
    }

    const std::vector<Criterion> criteria = {
        {1, "eigenstate measurement is deterministic and gentle under every scheme",
         criterion_eigenstate_measurement, 1000},
        {2, "transverse spin splits 50/50, analytically and over 10^4 trials",
         criterion_equal_splitting, 10000},
        {3, "the (up,up,down) chain branch has exact weight 0.25 and matching frequency",
         criterion_quarter_branch},
        {4, "collapse breaks x-conservation by one unit with silent devices",
         criterion_collapse_violates_conservation},
        {5, "the unitary scheme conserves J (operator and 100-seed state checks)",
         criterion_unitary_conserves},
        {6, "anamnesis: unitary history reconstructs, collapse loses half",
         criterion_anamnesis},
        {7, "full-swap runs retain the input Bloch vector, collapse does not",
         criterion_information_retention},
        {8, "macrostate equivalence tracks pointer labels only (200 cases)",
         criterion_macrostate_equivalence},
        {9, "CLI reports are byte-identical for identical config and seed",
         criterion_cli_determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.body();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        if (error.empty() && c.max_ms > 0 && ms > c.max_ms) {
            error = "runtime " + std::to_string(ms) + " ms exceeds the " +
                    std::to_string(c.max_ms) + " ms budget";
        }
        if (error.empty()) {
            std::cout << "[PASS] criterion " << c.id << ": " << c.name << " (" << ms << " ms)\n";
        } else {
            std::cout << "[FAIL] criterion " << c.id << ": " << c.name << " -- " << error
                      << "\n";
            ++failures;
        }
    }
    if (failures == 0) {
        std::cout << "acceptance: all " << criteria.size() << " criteria passed\n";
    } else {
        std::cout << "acceptance: " << failures << " criteria FAILED\n";
    }
    return failures;
}
