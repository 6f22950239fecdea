#pragma once

namespace jch {

inline constexpr const char* artifact_name = "jch-sim";
inline constexpr const char* artifact_version = "1.0.0";

}  // namespace jch
