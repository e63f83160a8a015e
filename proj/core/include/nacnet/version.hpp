#pragma once

namespace nacnet {

inline constexpr const char* kVersion = "0.1.0";

} // namespace nacnet
