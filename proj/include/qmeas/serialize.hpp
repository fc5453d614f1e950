#pragma once

#include <json.hpp>

#include "qmeas/state.hpp"

namespace qmeas {

/// Insertion-ordered JSON keeps report files byte-stable across runs.
using Json = nlohmann::ordered_json;

/// {"factors": [{"label": ..., "dim": ...}, ...]}
Json to_json(const HilbertSpace& space);

/// {"factors": [...], "amplitudes": [[re, im], ...]} in row-major factor order.
Json to_json(const StateVector& state);

/// {"factors": [...], "matrix": [[[re, im], ...], ...]} row by row.
Json to_json(const Operator& op);

HilbertSpace space_from_json(const Json& j);
StateVector state_from_json(const Json& j);
Operator operator_from_json(const Json& j);

}  // namespace qmeas
