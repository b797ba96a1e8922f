#pragma once
/**
 * @file tracer.hpp
 * @brief Specular ray transport through a segment scene.
 *
 * Rays advance to the nearest mirror hit, reflect across the mirror
 * direction and continue from kEpsGeom past the hit point. An endpoint hit
 * stops the path and flags it degenerate; exceeding the bounce cap flags a
 * suspected trap.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "specular/interval_set.hpp"
#include "specular/scene.hpp"

namespace specular {

inline constexpr int kDefaultBounceCap = 10000;

/// @brief Uniform-grid acceleration structure over a scene's segments.
class SceneIndex {
public:
    explicit SceneIndex(std::vector<Segment> segments);
    explicit SceneIndex(const Scene& scene) : SceneIndex(scene.segments) {}

    struct Found {
        Hit hit;
        std::size_t segment{0};
    };

    /// Nearest hit of origin + t d with t > kEpsGeom; d must be a unit vector.
    std::optional<Found> nearest_hit(Point origin, Point d) const;

    const std::vector<Segment>& segments() const { return segs_; }
    bool empty() const { return segs_.empty(); }
    /// Radius of a disc about the origin containing every segment.
    double radius() const { return radius_; }

private:
    std::optional<Found> brute_force(Point origin, Point d) const;
    void cell_range_of_segment(const Segment& s, std::vector<std::uint32_t>& cells) const;

    std::vector<Segment> segs_;
    BoundingBox box_{};
    double radius_{0.0};
    int nx_{0}, ny_{0};
    double cw_{1.0}, ch_{1.0};
    std::vector<std::uint32_t> cell_start_;
    std::vector<std::uint32_t> cell_items_;
};

enum class TraceStatus { ok, degenerate, cap_exceeded };

const char* to_string(TraceStatus s);

struct RayPath {
    DirectedLine entry;
    std::vector<Point> reflections;  ///< hit points in order (the endpoint hit of a degenerate ray included)
    std::vector<std::size_t> hit_segments;  ///< segment index per entry of reflections
    std::vector<Point> outgoing;     ///< unit direction after each reflection
    DirectedLine exit;               ///< canonical outgoing line
    int bounces{0};
    TraceStatus status{TraceStatus::ok};
    Point start;                     ///< where tracing began, before the first hit

    bool degenerate() const { return status == TraceStatus::degenerate; }
    /// True when the line meets the scene at all.
    bool hit() const { return bounces > 0 || status != TraceStatus::ok; }
};

/**
 * @brief Traces the directed line (v, w); (v, w) should be canonical.
 *
 * Tracing starts on the line outside the disc of radius index.radius().
 */
RayPath trace(const SceneIndex& index, const Direction& v, Point w, int cap = kDefaultBounceCap);
RayPath trace(const Scene& scene, const Direction& v, Point w, int cap = kDefaultBounceCap);

/// Traces a ray starting at `origin` (not a full line).
RayPath trace_from(const SceneIndex& index, Point origin, const Direction& v, int cap = kDefaultBounceCap);

struct BundleTransportResult {
    double theta{0.0};
    IntervalSet b2_set;   ///< exit offsets of same-direction rays, on K_theta
    IntervalSet b3_set;   ///< exit offsets of reflected rays, on K_{pi/2 - theta}
    double b1{0.0};       ///< Leb(B1)
    double b2{0.0};       ///< ray-weighted quadrature of same-direction exits
    double b3{0.0};       ///< ray-weighted quadrature of reflected exits
    Direction b2_direction;  ///< e^{i(theta + pi/2)}
    Direction b3_direction;  ///< e^{i(pi - theta)}
    std::size_t n_rays{0};
    std::size_t degenerate{0};
    std::size_t mixed_direction{0};
    std::size_t cap_exceeded{0};
    std::size_t duplicate_exits{0};  ///< non-degenerate rays sharing an exit line within kEpsGeom

    /// |b2 + b3 - b1|.
    double imbalance() const;
};

/**
 * @brief Transports the bundle {(v, w): v = e^{i(theta + pi/2)}, w = s e^{i theta}, s in B1}.
 *
 * B1 is discretized into n_rays cell midpoints of width Leb(B1)/n_rays.
 */
BundleTransportResult bundle_transport(const Scene& scene, double theta, const IntervalSet& b1,
                                       std::size_t n_rays, int threads = 0);

}  // namespace specular
