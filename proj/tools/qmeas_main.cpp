#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "qmeas/reports.hpp"
#include "qmeas/version.hpp"

namespace {

using namespace qmeas;

struct Options {
    std::string scheme = "standard";
    std::optional<uint64_t> seed;
    long trials = 1000;
    int reservoir = 2;
    double tolerance = 0.01;
    std::string distribution;  // empty = no kick statistics
    double location = 0.0;
    double scale = 0.1;
    std::string out = ".";
    std::string input = "x+";
    std::string axis = "z";
};

Axis parse_axis(const std::string& name) {
    if (name == "x") {
        return Axis::x();
    }
    if (name == "y") {
        return Axis::y();
    }
    if (name == "z") {
        return Axis::z();
    }
    throw ConfigError("unknown axis '" + name + "' (expected x, y or z)");
}

StateVector parse_input_state(const std::string& spec) {
    if (spec.size() != 2 || (spec[1] != '+' && spec[1] != '-')) {
        throw ConfigError("input spin must look like x+, y-, z+ ...");
    }
    const Axis axis = parse_axis(spec.substr(0, 1));
    return axis_eigenstate(axis, spec[1] == '+' ? SpinSign::Up : SpinSign::Down);
}

SchemeKind parse_scheme(const Options& opt) {
    if (opt.scheme == "standard") {
        return StandardCollapse{};
    }
    if (opt.scheme == "unitary") {
        return Unitary{};
    }
    if (opt.scheme == "instrumental") {
        return Instrumentalist{{OutcomeLabel::Up, OutcomeLabel::Down}, opt.tolerance};
    }
    throw ConfigError("unknown scheme '" + opt.scheme +
                      "' (expected standard, unitary or instrumental)");
}

void validate(const Options& opt) {
    if (opt.trials < 1) {
        throw ConfigError("--trials must be at least 1");
    }
    if (!(opt.tolerance > 0.0 && opt.tolerance < 0.5)) {
        throw ConfigError("--tolerance must lie in (0, 1/2)");
    }
    if (opt.reservoir % 2 != 0) {
        throw ReservoirParity("--reservoir must be even");
    }
    if (opt.reservoir < 2 || opt.reservoir > 8) {
        throw ConfigError("--reservoir must lie in {2, 4, 6, 8}");
    }
    if (!opt.distribution.empty() && opt.distribution != "cauchy" &&
        opt.distribution != "uniform") {
        throw ConfigError("--distribution must be cauchy or uniform");
    }
}

uint64_t require_seed(const Options& opt) {
    if (!opt.seed.has_value()) {
        throw ConfigError("--seed is required for this run");
    }
    return *opt.seed;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        throw IoError("failed while writing '" + path.string() + "'");
    }
}

Json resolved_config(const Options& opt, const std::string& command) {
    Json j{{"command", command},
           {"scheme", opt.scheme},
           {"trials", opt.trials},
           {"reservoir", opt.reservoir},
           {"tolerance", opt.tolerance},
           {"out", opt.out},
           {"input", opt.input},
           {"axis", opt.axis}};
    if (opt.seed.has_value()) {
        j["seed"] = *opt.seed;
    }
    if (!opt.distribution.empty()) {
        j["distribution"] = opt.distribution;
        j["location"] = opt.location;
        j["scale"] = opt.scale;
    }
    return j;
}

Json report_shell(const Options& opt, const std::string& command) {
    return Json{{"version", kVersion}, {"config", resolved_config(opt, command)}};
}

int cmd_conservation(const Options& opt) {
    const uint64_t seed = require_seed(opt);
    const SchemeKind scheme = parse_scheme(opt);
    ExperimentScript script = canonical_chain(seed, opt.reservoir);

    SplitMix64 rng(seed);
    auto [ledger, record] = run_conservation_chain(script, scheme, rng);

    Json report = report_shell(opt, "conservation");
    Json registers = Json::array();
    for (const auto& step : script.steps) {
        registers.push_back(to_json(ApparatusRegister(step.device, script.reservoir_size)));
    }
    report["registers"] = std::move(registers);
    report["ledger"] = to_json(ledger);
    report["record"] = to_json(record);

    std::vector<TrialStepRow> rows;
    std::string sampled_summary;
    if (std::holds_alternative<Unitary>(scheme)) {
        // Dressed-microstate sweep: each trial randomizes the reservoir
        // microstates and reruns the full ledger.
        ExperimentScript dressed = script;
        dressed.dress_reservoirs = true;
        double max_delta = ledger.max_abs_delta;
        for (long t = 0; t < opt.trials; ++t) {
            const uint64_t trial_seed = SplitMix64::derive_seed(seed, static_cast<uint64_t>(t));
            SplitMix64 trial_rng(trial_seed);
            auto [trial_ledger, trial_record] =
                run_conservation_chain(dressed, scheme, trial_rng);
            max_delta = std::max(max_delta, trial_ledger.max_abs_delta);
            for (std::size_t s = 1; s < trial_ledger.steps.size(); ++s) {
                const LedgerRow& row = trial_ledger.steps[s];
                rows.push_back(TrialStepRow{trial_seed, t, row.step, row.device, row.outcome,
                                            row.probability, row.delta_total});
            }
        }
        report["sampling"] =
            Json{{"kind", "dressed_microstate_sweep"}, {"trials", opt.trials},
                 {"max_abs_delta", max_delta}};
        sampled_summary = "max|dJ| over " + std::to_string(opt.trials) +
                          " dressed trials = " + format_double(max_delta);
    } else {
        BranchSample sample = sample_chain_branches(script, scheme, opt.trials, seed);
        rows = sample.rows;
        Json counts = Json::object();
        for (const auto& [key, count] : sample.counts) {
            counts[key] = count;
        }
        report["sampling"] =
            Json{{"kind", "branch_frequencies"}, {"trials", sample.trials},
                 {"counts", std::move(counts)}};
        const auto it = sample.counts.find("up,up,down");
        const double freq =
            it == sample.counts.end()
                ? 0.0
                : static_cast<double>(it->second) / static_cast<double>(sample.trials);
        sampled_summary = "P(up,up,down) = " + format_double(freq) + " over " +
                          std::to_string(sample.trials) + " trials";
        write_file(std::filesystem::path(opt.out) / "conservation_outcomes.jsonl",
                   outcomes_jsonl(rows));
    }

    const std::filesystem::path dir(opt.out);
    write_file(dir / "conservation_report.json", report.dump(2) + "\n");
    write_file(dir / "conservation_trials.csv", trials_csv(rows));

    std::cout << "conservation[" << ledger.scheme << "]: max|dJ_total| = "
              << format_double(ledger.max_abs_delta) << " (ledger); " << sampled_summary << "\n";
    return 0;
}

int cmd_anamnesis(const Options& opt) {
    const SchemeKind scheme = parse_scheme(opt);
    const bool stochastic = !std::holds_alternative<Unitary>(scheme);
    const uint64_t seed = stochastic ? require_seed(opt) : opt.seed.value_or(0);

    // The collapse contrast runs the canonical single-measurement script; the
    // unitary scheme exercises the full chain.
    ExperimentScript script = std::holds_alternative<StandardCollapse>(scheme)
                                  ? single_z_script(seed, opt.reservoir)
                                  : canonical_chain(seed, opt.reservoir);
    const AnamnesisReport result = run_anamnesis(script, scheme);

    Json report = report_shell(opt, "anamnesis");
    Json registers = Json::array();
    for (const auto& step : script.steps) {
        registers.push_back(to_json(ApparatusRegister(step.device, script.reservoir_size)));
    }
    report["registers"] = std::move(registers);
    report["anamnesis"] = to_json(result);
    write_file(std::filesystem::path(opt.out) / "anamnesis_report.json", report.dump(2) + "\n");

    std::cout << "anamnesis[" << result.scheme
              << "]: consistent = " << (result.fully_consistent ? "true" : "false");
    if (result.first_mismatch_time >= 0) {
        std::cout << ", first mismatch at t = " << result.first_mismatch_time
                  << " with fidelity " << format_double(result.first_mismatch_fidelity);
    }
    std::cout << "\n";
    return 0;
}

int cmd_special_search(const Options& opt) {
    const uint64_t seed = require_seed(opt);
    const StateVector input = parse_input_state(opt.input);
    const Axis axis = parse_axis(opt.axis);

    SearchGrid grid;
    for (int k = 0; k <= 8; ++k) {
        grid.thetas.push_back(k * std::numbers::pi / 8.0);
    }
    grid.preparations = {BlochVector{0.5, 0, 0},  BlochVector{-0.5, 0, 0},
                         BlochVector{0, 0.5, 0},  BlochVector{0, -0.5, 0},
                         BlochVector{0, 0, 0.5},  BlochVector{0, 0, -0.5}};

    const auto results = special_state_search(input, axis, grid, opt.tolerance);

    Json report = report_shell(opt, "special-search");
    Json results_json = Json::array();
    for (const auto& r : results) {
        results_json.push_back(to_json(r));
    }
    report["grid"] = Json{{"thetas", grid.thetas.size()},
                          {"preparations", grid.preparations.size()}};
    report["special_states"] = std::move(results_json);

    const std::filesystem::path dir(opt.out);
    write_file(dir / "special_results.csv", special_results_csv(results));

    std::string kick_summary = "no kick statistics requested";
    if (!opt.distribution.empty()) {
        KickDistribution dist;
        if (opt.distribution == "cauchy") {
            dist = CauchyKicks{opt.location, opt.scale};
        } else {
            dist = UniformKicks{opt.location, opt.scale};
        }
        SplitMix64 rng(seed);
        const KickStatistics stats =
            kick_statistics(input, axis, dist, opt.trials, rng, opt.tolerance);
        report["kick_statistics"] = to_json(stats);
        write_file(dir / "kick_stats.csv", kick_statistics_csv(stats));
        kick_summary = "kick frequencies up/down/superposed = " + format_double(stats.freq_up) +
                       "/" + format_double(stats.freq_down) + "/" +
                       format_double(stats.freq_superposed);
    }
    write_file(dir / "special_report.json", report.dump(2) + "\n");

    std::cout << "special-search: " << results.size() << " special grid points; " << kick_summary
              << "\n";
    return 0;
}

int cmd_born_check(const Options& opt) {
    const uint64_t seed = require_seed(opt);
    const Axis axis = parse_axis(opt.axis);
    const Observable obs = spin_operator(axis);
    const StateVector up_state = axis_eigenstate(axis, SpinSign::Up);

    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::vector<std::pair<std::string, BlochVector>> preparations = {
        {"x+", {0.5, 0, 0}},
        {"x-", {-0.5, 0, 0}},
        {"y+", {0, 0.5, 0}},
        {"y-", {0, -0.5, 0}},
        {"z+", {0, 0, 0.5}},
        {"z-", {0, 0, -0.5}},
        {"diag+", {0.5 * inv_sqrt3, 0.5 * inv_sqrt3, 0.5 * inv_sqrt3}},
        {"xz+", {0.5 * inv_sqrt2, 0, 0.5 * inv_sqrt2}}};

    Json table = Json::array();
    std::string csv = "prep,analytic_p_up,empirical_p_up,abs_error,four_sigma";
    csv += "\r\n";
    double max_excess = 0.0;  // error minus its 4-sigma allowance, worst case
    std::vector<TrialStepRow> outcome_rows;
    for (std::size_t p = 0; p < preparations.size(); ++p) {
        const auto& [name, bloch] = preparations[p];
        const StateVector prep = state_from_bloch(bloch);
        const double analytic = born_probability(prep, up_state);
        long ups = 0;
        for (long t = 0; t < opt.trials; ++t) {
            const uint64_t trial_seed =
                SplitMix64::derive_seed(seed ^ (p * 0x9E3779B97F4A7C15ull), t);
            SplitMix64 trial_rng(trial_seed);
            auto [reg, ready] = prepare_ready("born", opt.reservoir);
            auto [outcome, post] = measure_standard(tensor(prep, ready), obs, reg, trial_rng);
            if (outcome.label == OutcomeLabel::Up) {
                ++ups;
            }
            if (t < 32) {  // keep the JSONL sample bounded
                outcome_rows.push_back(TrialStepRow{trial_seed, t, 1, "born",
                                                    to_string(outcome.label),
                                                    outcome.probability, JTriple{}});
            }
        }
        const double empirical = static_cast<double>(ups) / static_cast<double>(opt.trials);
        const double err = std::abs(empirical - analytic);
        const double sigma =
            std::sqrt(std::max(analytic * (1.0 - analytic), 1e-12) /
                      static_cast<double>(opt.trials));
        max_excess = std::max(max_excess, err - 4.0 * sigma);
        table.push_back(Json{{"prep", name},
                             {"analytic_p_up", analytic},
                             {"empirical_p_up", empirical},
                             {"abs_error", err},
                             {"four_sigma", 4.0 * sigma}});
        csv += name + "," + format_double(analytic) + "," + format_double(empirical) + "," +
               format_double(err) + "," + format_double(4.0 * sigma) + "\r\n";
    }

    Json report = report_shell(opt, "born-check");
    report["table"] = std::move(table);
    const std::filesystem::path dir(opt.out);
    write_file(dir / "born_check.json", report.dump(2) + "\n");
    write_file(dir / "born_check.csv", csv);
    write_file(dir / "born_outcomes.jsonl", outcomes_jsonl(outcome_rows));

    std::cout << "born-check: worst (error - 4 sigma) = " << format_double(max_excess)
              << (max_excess <= 0.0 ? " (within bounds)" : " (OUT OF BOUNDS)") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin measurement simulator: collapse vs unitary schemes"};
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read options from a key=value config file");

    Options opt;
    app.add_option("--scheme", opt.scheme, "standard | unitary | instrumental");
    app.add_option("--seed", opt.seed, "64-bit seed; required for stochastic runs");
    app.add_option("--trials", opt.trials, "trial count for sampled statistics");
    app.add_option("--reservoir", opt.reservoir, "reservoir spins per device (even, 2..8)");
    app.add_option("--tolerance", opt.tolerance, "macrostate/detection tolerance in (0, 1/2)");
    app.add_option("--distribution", opt.distribution, "kick distribution: cauchy | uniform");
    app.add_option("--location", opt.location, "kick location (cauchy) or lower bound (uniform)");
    app.add_option("--scale", opt.scale, "kick scale (cauchy) or upper bound (uniform)");
    app.add_option("--out", opt.out, "output directory (must exist)");
    app.add_option("--input", opt.input, "prepared system spin: x+, x-, y+, y-, z+ or z-");
    app.add_option("--axis", opt.axis, "measured axis: x, y or z");

    auto* conservation =
        app.add_subcommand("conservation", "x,z,x chain with an angular momentum ledger");
    auto* anamnesis =
        app.add_subcommand("anamnesis", "forward/backward record-consistency check");
    auto* special =
        app.add_subcommand("special-search", "special-state grid search and kick statistics");
    auto* born = app.add_subcommand("born-check", "analytic vs sampled Born weights");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        validate(opt);
        if (conservation->parsed()) {
            return cmd_conservation(opt);
        }
        if (anamnesis->parsed()) {
            return cmd_anamnesis(opt);
        }
        if (special->parsed()) {
            return cmd_special_search(opt);
        }
        if (born->parsed()) {
            return cmd_born_check(opt);
        }
        throw ConfigError("no subcommand selected");
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ReservoirParity& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateAxis& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
