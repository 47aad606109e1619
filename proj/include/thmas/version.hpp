#pragma once

namespace thmas {
inline constexpr const char* kVersion = "0.1.0";
}
