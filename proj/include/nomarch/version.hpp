#pragma once

namespace nomarch {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace nomarch
