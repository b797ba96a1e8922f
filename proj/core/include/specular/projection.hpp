#pragma once
/**
 * @file projection.hpp
 * @brief Orthogonal projections of segment scenes onto the lines K_theta.
 *
 * A point p projects to the coordinate p . (cos theta, sin theta) on K_theta.
 * The reference interval I_{theta,rho} is the coordinate range [0, rho].
 */

#include <functional>
#include <span>
#include <vector>

#include "specular/interval_set.hpp"
#include "specular/scene.hpp"

namespace specular {

/// Projection of one segment onto K_theta (possibly a single point).
Interval project_segment(const Segment& s, double theta);

/// Pi_theta(scene) as a normalized IntervalSet.
IntervalSet project_scene(const Scene& scene, double theta);
IntervalSet project_segments(std::span<const Segment> segments, double theta);

/// Leb(Pi_theta(segments)).
double shadow_measure(std::span<const Segment> segments, double theta);
inline double shadow_measure(const Scene& scene, double theta) {
    return shadow_measure(std::span<const Segment>(scene.segments), theta);
}

/// Leb(Pi_theta(segments) symmetric-difference [0, rho]).
double symdiff_measure(std::span<const Segment> segments, double theta, double rho);
inline double symdiff_measure(const Scene& scene, double theta, double rho) {
    return symdiff_measure(std::span<const Segment>(scene.segments), theta, rho);
}

struct BadAngleResult {
    double estimate{0.0};          ///< grid_step x number of failing grid angles
    std::vector<double> bad_list;  ///< failing grid angles in increasing order
    double grid_step{0.0};
    std::size_t grid_points{0};
};

/**
 * @brief Grid estimate of the measure of angles in [theta_a, theta_b] failing `passes`.
 *
 * Grid angles are the cell midpoints theta_a + (i + 1/2) step, so open and
 * closed ranges are treated alike. Requires step <= (theta_b - theta_a)/100.
 * The predicate is evaluated in parallel and must be thread-safe.
 */
BadAngleResult bad_angle_measure(double theta_a, double theta_b,
                                 const std::function<bool(double)>& passes, double grid_step,
                                 int threads = 0);

/// Midpoint grid used by bad_angle_measure.
std::vector<double> angle_grid(double theta_a, double theta_b, double grid_step);

}  // namespace specular
