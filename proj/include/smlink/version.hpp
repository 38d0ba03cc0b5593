#pragma once

namespace smlink {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smlink
