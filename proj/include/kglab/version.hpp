#pragma once

namespace kglab {
inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;
}  // namespace kglab
