#pragma once

namespace leadtime {

inline constexpr const char* kVersion = "1.0.0";

} // namespace leadtime
