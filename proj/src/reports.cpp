#include "qmeas/reports.hpp"

#include <charconv>

namespace qmeas {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

constexpr const char* kCrlf = "\r\n";

Json device_triples(const std::vector<std::pair<std::string, JTriple>>& devices) {
    Json j = Json::object();
    for (const auto& [label, triple] : devices) {
        j[label] = to_json(triple);
    }
    return j;
}

}  // namespace

Json to_json(const ApparatusRegister& reg) {
    return Json{{"label", reg.label()},
                {"reservoir_size", reg.reservoir_size()},
                {"pointer_levels",
                 Json{{"ready", 0}, {"up", 1}, {"down", 2}, {"failed", 3}}}};
}

Json to_json(const JTriple& j) { return Json{{"x", j.x}, {"y", j.y}, {"z", j.z}}; }

Json to_json(const RecordEntry& entry) {
    return Json{{"t", entry.time_index},
                {"device", entry.device},
                {"macrostate", to_string(entry.label)},
                {"confidence", entry.confidence}};
}

Json to_json(const ServerRecord& record) {
    Json entries = Json::array();
    for (const auto& e : record.entries) {
        entries.push_back(to_json(e));
    }
    return Json{{"entries", std::move(entries)}, {"final_time", record.final_time}};
}

Json to_json(const LedgerRow& row) {
    return Json{{"step", row.step},
                {"device", row.device},
                {"outcome", row.outcome},
                {"probability", row.probability},
                {"J_total", to_json(row.total)},
                {"J_system", to_json(row.system)},
                {"J_devices", device_triples(row.devices)},
                {"dJ_total", to_json(row.delta_total)},
                {"dJ_system", to_json(row.delta_system)},
                {"dJ_devices", device_triples(row.delta_devices)}};
}

Json to_json(const BranchRow& row) {
    Json outcomes = Json::array();
    for (OutcomeLabel o : row.outcomes) {
        outcomes.push_back(to_string(o));
    }
    return Json{{"outcomes", std::move(outcomes)},
                {"weight", row.weight},
                {"dJ_total", to_json(row.delta_total)},
                {"dJ_post_prep", to_json(row.delta_post_prep)},
                {"dJ_devices", device_triples(row.delta_devices)}};
}

Json to_json(const LedgerReport& report) {
    Json steps = Json::array();
    for (const auto& row : report.steps) {
        steps.push_back(to_json(row));
    }
    Json branches = Json::array();
    for (const auto& row : report.branches) {
        branches.push_back(to_json(row));
    }
    return Json{{"scheme", report.scheme},
                {"seed", report.seed},
                {"max_abs_delta", report.max_abs_delta},
                {"steps", std::move(steps)},
                {"branches", std::move(branches)}};
}

Json to_json(const AnamnesisReport& report) {
    Json checkpoints = Json::array();
    for (const auto& cp : report.checkpoints) {
        checkpoints.push_back(Json{{"t", cp.time_index},
                                   {"fidelity", cp.fidelity},
                                   {"record_consistent", cp.record_consistent}});
    }
    return Json{{"scheme", report.scheme},
                {"fully_consistent", report.fully_consistent},
                {"first_mismatch_time", report.first_mismatch_time},
                {"first_mismatch_fidelity", report.first_mismatch_fidelity},
                {"checkpoints", std::move(checkpoints)},
                {"record", to_json(report.record)}};
}

Json to_json(const SpecialStateResult& result) {
    return Json{{"theta", result.theta},
                {"preparation", Json{{"sx", result.preparation.sx},
                                     {"sy", result.preparation.sy},
                                     {"sz", result.preparation.sz}}},
                {"score", result.score},
                {"outcome", to_string(result.outcome)}};
}

Json to_json(const KickStatistics& stats) {
    return Json{{"trials", stats.trials},
                {"frequencies", Json{{"up", stats.freq_up},
                                     {"down", stats.freq_down},
                                     {"superposed", stats.freq_superposed}}},
                {"born_weights", Json{{"up", stats.born_up}, {"down", stats.born_down}}}};
}

std::string trials_csv(const std::vector<TrialStepRow>& rows) {
    std::string out = "seed,step,device,outcome,p,dJx,dJy,dJz";
    out += kCrlf;
    for (const auto& r : rows) {
        out += std::to_string(r.seed);
        out += ",";
        out += std::to_string(r.step);
        out += ",";
        out += r.device;
        out += ",";
        out += r.outcome;
        out += ",";
        out += format_double(r.probability);
        out += ",";
        out += format_double(r.delta.x);
        out += ",";
        out += format_double(r.delta.y);
        out += ",";
        out += format_double(r.delta.z);
        out += kCrlf;
    }
    return out;
}

std::string special_results_csv(const std::vector<SpecialStateResult>& results) {
    std::string out = "theta,prep_sx,prep_sy,prep_sz,score,outcome";
    out += kCrlf;
    for (const auto& r : results) {
        out += format_double(r.theta);
        out += ",";
        out += format_double(r.preparation.sx);
        out += ",";
        out += format_double(r.preparation.sy);
        out += ",";
        out += format_double(r.preparation.sz);
        out += ",";
        out += format_double(r.score);
        out += ",";
        out += to_string(r.outcome);
        out += kCrlf;
    }
    return out;
}

std::string kick_statistics_csv(const KickStatistics& stats) {
    std::string out = "outcome,frequency,born_weight";
    out += kCrlf;
    out += "up," + format_double(stats.freq_up) + "," + format_double(stats.born_up) + kCrlf;
    out += "down," + format_double(stats.freq_down) + "," + format_double(stats.born_down) + kCrlf;
    out += "superposed," + format_double(stats.freq_superposed) + ",";
    out += kCrlf;
    return out;
}

std::string outcomes_jsonl(const std::vector<TrialStepRow>& rows) {
    std::string out;
    for (const auto& r : rows) {
        Json line{{"device", r.device},
                  {"label", r.outcome},
                  {"probability", r.probability},
                  {"seed", r.seed},
                  {"step", r.step}};
        out += line.dump();
        out += "\n";
    }
    return out;
}

}  // namespace qmeas
