#pragma once
/**
 * @file block.hpp
 * @brief Diamonds, blocks S_{rho,theta1,eps} and their verification.
 *
 * A block is a finite family of slope -1 segments inside
 * Q_{eps,rho} = (-rho eps, rho(1+eps))^2 whose shadow is close to
 * I_{theta,rho} = [0, rho] for most theta in [0, theta1] and has measure at
 * most eps rho for most theta in (theta1, pi).
 *
 * Blocks are generated at rho = 1 and scaled: S_rho = rho S_1.
 */

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specular/scene.hpp"

namespace specular {

/// arctan(1/3), the upper bound for theta1.
inline const double kArctanThird = std::atan(1.0 / 3.0);

/// @brief Closed square with sides at angle pi/4 to the axes, given by its left vertex.
struct Diamond {
    Point x1;
    double r{1.0};

    Point x2() const { return x1 + Point(r, r); }
    Point x3() const { return x1 + Point(r, -r); }
    Point x4() const { return x1 + Point(2.0 * r, 0.0); }
    /// Vertices in counter-clockwise order x1, x3, x4, x2.
    std::array<Point, 4> polygon() const { return {x1, x3(), x4(), x2()}; }
};

/// Segments x1-x3, x2-x4 and (x1+x2)/2-(x3+x4)/2, all of slope -1.
std::array<Segment, 3> diamond_segments(const Diamond& d);

struct BlockSpec {
    double rho{1.0};
    double theta1{0.30};
    double eps{0.25};
    /// Search budget: maximal number of refinement levels per candidate.
    int max_levels{15};
};

/// Throws Error(precondition) unless rho > 0, 0 < theta1 < arctan(1/3), 0 < eps < 1, max_levels >= 0.
void validate(const BlockSpec& spec);

struct BlockReport {
    double bad_range1{0.0};        ///< grid estimate of Leb{theta in [0,theta1]: symdiff > eps rho}
    double bad_range2{0.0};        ///< grid estimate of Leb{theta in (theta1,pi): shadow > eps rho}
    double max_symdiff_good{0.0};  ///< largest symdiff over grid angles passing range 1
    double max_shadow_good{0.0};   ///< largest shadow over grid angles passing range 2
    bool contained{false};         ///< bounding box inside the open square Q_{eps,rho}
    double diameter{0.0};
    double diameter_bound{0.0};    ///< 3 sqrt(2) rho
    std::size_t segment_count{0};
    double grid_step{0.0};
    bool accepted{false};
};

/**
 * @brief Evaluates the block predicates on a midpoint angle grid.
 *
 * Throws Error(precondition) when some segment is not of slope -1.
 */
BlockReport verify_block(const Scene& scene, const BlockSpec& spec, double grid_step, int threads = 0);

/// One step of the deterministic search, for diagnostics.
struct BlockSearchStep {
    double theta_r{0.0};        ///< tiling direction of the candidate
    int level{0};               ///< refinement depth (segments = 2^level)
    double needle{0.0};         ///< coincidence direction chosen at this level
    double coarse_bad1{0.0};    ///< coarse-grid estimates used for screening
    double coarse_bad2{0.0};
    bool verified{false};       ///< a full verify_block was run
    bool accepted{false};
};

struct BlockSearchResult {
    Scene scene;            ///< accepted block, or the best candidate seen when none passed
    BlockReport report;     ///< full verification of `scene`
    bool accepted{false};
    std::vector<BlockSearchStep> steps;
};

/**
 * @brief Deterministic generate-and-verify search at rho = 1, scaled to spec.rho.
 *
 * For each tiling direction theta_r in a fixed list, a base segment whose
 * shadow on K_{theta_r} is exactly [0, 1] is refined level by level. A level
 * splits every segment into halves and translates the second half along
 * K_{theta_r + pi/2}; the translation is chosen among a fixed set of
 * coincidence directions so that the two halves cast the same shadow there,
 * greedily minimizing the excess shadow over a coarse angle grid subject to
 * containment. Candidates that pass the coarse screen are verified with
 * verify_block at grid_step; the first accepted candidate is returned.
 */
BlockSearchResult search_block(const BlockSpec& spec, double grid_step, int threads = 0);

/**
 * @brief The canonical block: the first candidate of search_block passing verify_block.
 *
 * Throws Error(budget_exhausted) when no candidate passes within spec.max_levels.
 */
Scene build_block(const BlockSpec& spec, double grid_step = 1e-3, int threads = 0);

}  // namespace specular
