#pragma once

namespace fanscan {
inline constexpr const char* kVersion = "fanscan 0.1.0";
}
