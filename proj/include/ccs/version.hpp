#pragma once

namespace ccs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ccs
