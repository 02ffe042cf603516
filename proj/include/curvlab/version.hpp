#pragma once

namespace curvlab {
inline constexpr const char* kVersion = "1.0.0";
}
