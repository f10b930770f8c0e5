#pragma once

namespace entscale {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace entscale
