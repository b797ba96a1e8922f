#pragma once
/**
 * @file urchin.hpp
 * @brief The sea-urchin mirror set F: N radial rectangles filled with rows of blocks.
 *
 * Spike k is the rectangle M'_k with inner vertices a_k, a_{k+1}, where
 * a_k = r1 exp(i (k - 1/2) 2 pi / N), and outer vertices on the unit circle.
 * Spike 0 holds the translated blocks T_j(S), j = 0..j*, and F is the union
 * of its rotations by 2 pi k / N.
 */

#include <array>
#include <optional>
#include <vector>

#include "specular/scene.hpp"

namespace specular {

struct UrchinParams {
    double eps{1.0};    ///< target of the invisibility estimate
    int n{20};          ///< number of spikes N, divisible by 4
    double r1{0.1};     ///< inner radius
    double rho{0.0};    ///< block size, from q = rho (1 + 2 eps1)
    double eps1{0.0};   ///< block accuracy
    bool strict{false}; ///< both parameter inequalities hold

    /// Sides of eps1 rho N^2/(pi r1) < eps/(16 pi).
    double ineq1_lhs{0.0}, ineq1_rhs{0.0};
    /// Sides of N eps1 < eps/(16 N).
    double ineq2_lhs{0.0}, ineq2_rhs{0.0};

    double theta1() const;  ///< 2 pi / N
    double q() const;       ///< 2 r1 sin(pi / N) = |a_1 - a_0|
    Point a(int k) const;   ///< r1 exp(i (k - 1/2) 2 pi / N)
};

struct UrchinOverrides {
    std::optional<int> n;
    std::optional<double> r1;
    /// Relaxed mode: eps1 is raised to at least this value (strict flag then reports the outcome).
    std::optional<double> eps1_floor;
};

/// Recomputes rho, strict flag and inequality sides from eps, n, r1 and eps1.
void refresh(UrchinParams& p);

/**
 * @brief Chooses N, r1, rho and eps1 for a target eps in (0, 1].
 *
 * N defaults to the smallest multiple of 4 with 2 pi / N < arctan(1/3) (20);
 * r1 defaults to 0.1; eps1 is the largest value satisfying both inequalities
 * (taken as 0.999 of their supremum), unless a relaxation floor is given.
 * Throws Error(infeasible) when an override violates the constraints on N or r1.
 */
UrchinParams solve_parameters(double eps, const UrchinOverrides& overrides = {});

/// Vertices of M'_k in order a_k, a_{k+1}, outer(k+1), outer(k).
std::array<Point, 4> rectangle_M(int k, const UrchinParams& p);

/// Largest j with T_j(Q_{eps1,rho}) inside M'_0 (may be negative).
int j_star(const UrchinParams& p);

/// The translation T_j as an offset vector.
Point translation_T(int j, const UrchinParams& p);

struct Provenance {
    int k{0};  ///< spike index
    int j{0};  ///< translation index
};

struct UrchinScene {
    Scene scene;
    std::vector<Provenance> provenance;  ///< one entry per segment
    int j_star{0};
    std::size_t block_count{0};         ///< segments per block
};

/**
 * @brief Assembles F from a block S_{rho,theta1,eps1}.
 *
 * Throws Error(block_too_wide) when j* < 0.
 */
UrchinScene build_urchin(const UrchinParams& p, const Scene& block);

/// Records the parameters and layout of an urchin in the scene metadata.
void annotate_urchin(UrchinScene& urchin, const UrchinParams& p);

/// Parameters stored by annotate_urchin; throws Error(parse_error) when missing.
UrchinParams urchin_params_from_metadata(const Scene& scene);

/**
 * @brief Rebuilds provenance for a scene in build_urchin order (spike-major, then j, then block segment).
 *
 * Throws Error(parse_error) when the segment count does not match the layout.
 */
UrchinScene urchin_from_scene(Scene scene, const UrchinParams& p);

}  // namespace specular
