#pragma once
/**
 * @file scene_io.hpp
 * @brief Plain-text scene files.
 *
 * Format:
 * @code
 * specular-scene v1
 * # key value
 * segment x1 y1 x2 y2
 * @endcode
 * Numbers use the shortest decimal form that reads back to the same double,
 * so read(write(scene)) reproduces every coordinate bit-exactly.
 */

#include <filesystem>
#include <iosfwd>
#include <string>

#include "specular/scene.hpp"

namespace specular {

inline constexpr const char* kSceneHeader = "specular-scene v1";

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

std::string write_scene_string(const Scene& scene);
/// Throws Error(parse_error) with the line number, or Error(version_mismatch).
Scene read_scene_string(const std::string& text);

void write_scene(const Scene& scene, std::ostream& out);
Scene read_scene(std::istream& in);

/// Throws Error(io_error) when the file cannot be written.
void write_scene(const Scene& scene, const std::filesystem::path& path);
/// Throws Error(io_error) when the file cannot be read.
Scene read_scene(const std::filesystem::path& path);

}  // namespace specular
