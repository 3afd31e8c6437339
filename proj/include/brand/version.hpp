#pragma once

namespace brand {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace brand
