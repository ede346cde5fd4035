#pragma once

namespace ranlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ranlab
