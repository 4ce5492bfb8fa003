#pragma once

namespace sqz {

inline constexpr const char* kVersion = "0.1.0";

// Bumped when any serialized output layout changes.
inline constexpr int kFormatVersion = 1;

}  // namespace sqz
