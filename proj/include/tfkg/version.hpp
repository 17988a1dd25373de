#pragma once

namespace tfkg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tfkg
