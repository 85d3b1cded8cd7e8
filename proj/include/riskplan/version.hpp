#pragma once

namespace riskplan {

inline constexpr const char* kToolName = "riskplan";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace riskplan
