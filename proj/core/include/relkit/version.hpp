#pragma once

namespace relkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relkit
