#pragma once

namespace plancklab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace plancklab
