#pragma once
/**
 * @file version.hpp
 * @brief Library and tool version string.
 */

namespace specular {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace specular
