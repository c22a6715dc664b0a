#pragma once

namespace dualitylab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dualitylab
