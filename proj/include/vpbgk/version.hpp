#pragma once

namespace vpbgk {
inline constexpr const char* kVersion = "0.1.0";
}
