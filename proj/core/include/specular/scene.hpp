#pragma once
/**
 * @file scene.hpp
 * @brief Ordered collection of mirror segments plus free-form metadata.
 */

#include <string>
#include <utility>
#include <vector>

#include "specular/geometry.hpp"

namespace specular {

struct BoundingBox {
    Point lo;
    Point hi;

    bool empty() const { return hi.x < lo.x || hi.y < lo.y; }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
};

struct Scene {
    std::vector<Segment> segments;
    /// Ordered key/value pairs; serialized as "# key value" lines.
    std::vector<std::pair<std::string, std::string>> metadata;

    std::size_t size() const { return segments.size(); }
    bool empty() const { return segments.empty(); }

    /// Returns the value stored under key, or an empty string.
    std::string meta(const std::string& key) const;
    void set_meta(const std::string& key, const std::string& value);

    /// Axis-aligned bounding box; empty() when the scene has no segments.
    BoundingBox bounds() const;
    /// Largest distance between two segment endpoints.
    double diameter() const;
    double total_length() const;
};

Scene scaled(const Scene& s, double factor);
Scene translated(const Scene& s, Point offset);
/// Rotation about the origin by phi radians.
Scene rotated(const Scene& s, double phi);
/// Concatenation preserving order (metadata of a is kept).
Scene merged(const Scene& a, const Scene& b);

}  // namespace specular
