#pragma once

namespace bridgesift {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace bridgesift
