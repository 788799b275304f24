#pragma once

namespace ids {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ids
