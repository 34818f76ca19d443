#pragma once

namespace riskbound {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace riskbound
