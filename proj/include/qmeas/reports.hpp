#pragma once

#include "qmeas/experiments.hpp"
#include "qmeas/serialize.hpp"

namespace qmeas {

/// Register configuration with the pointer-level index contract spelled out.
Json to_json(const ApparatusRegister& reg);

Json to_json(const JTriple& j);
Json to_json(const RecordEntry& entry);
Json to_json(const ServerRecord& record);
Json to_json(const LedgerRow& row);
Json to_json(const BranchRow& row);
Json to_json(const LedgerReport& report);
Json to_json(const AnamnesisReport& report);
Json to_json(const SpecialStateResult& result);
Json to_json(const KickStatistics& stats);

/// Per-trial table, RFC 4180 (CRLF): seed,step,device,outcome,p,dJx,dJy,dJz
std::string trials_csv(const std::vector<TrialStepRow>& rows);

/// theta,prep_sx,prep_sy,prep_sz,score,outcome
std::string special_results_csv(const std::vector<SpecialStateResult>& results);

/// outcome,frequency,born_weight (born_weight empty for superposed)
std::string kick_statistics_csv(const KickStatistics& stats);

/// One JSON object per line: {device, label, probability, seed, step}
std::string outcomes_jsonl(const std::vector<TrialStepRow>& rows);

/// Shortest-round-trip decimal for doubles; used by every CSV writer so
/// reports are byte-identical across runs.
std::string format_double(double v);

}  // namespace qmeas
