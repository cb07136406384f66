#pragma once

namespace heatwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heatwalk
