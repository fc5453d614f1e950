#pragma once

namespace qmeas {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qmeas
