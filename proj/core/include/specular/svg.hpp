#pragma once
/**
 * @file svg.hpp
 * @brief Deterministic SVG rendering of scenes, ray paths and rhombus outlines.
 */

#include <filesystem>
#include <string>
#include <vector>

#include "specular/mirror.hpp"
#include "specular/scene.hpp"
#include "specular/tracer.hpp"

namespace specular {

struct SvgOptions {
    int width_px{800};                 ///< output width; height follows the aspect ratio
    bool mirror_mode{false};           ///< dotted mirrors (used with rhombus outlines)
    std::vector<Quad> outlines;        ///< drawn as bold closed polygons
    std::string title;                 ///< optional <title> element
};

/// Renders the scene (solid or dotted strokes), ray paths (polylines) and outlines.
std::string render_svg(const Scene& scene, const std::vector<RayPath>& paths = {}, const SvgOptions& options = {});

/// Writes render_svg output; throws Error(io_error) on failure.
void write_svg(const std::filesystem::path& path, const Scene& scene, const std::vector<RayPath>& paths = {},
               const SvgOptions& options = {});

}  // namespace specular
