#pragma once

namespace bioen {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bioen
