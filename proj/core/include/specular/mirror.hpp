#pragma once
/**
 * @file mirror.hpp
 * @brief The invisible mirror G = M_{n*,s*}(L): rhombus Z, subdivision maps,
 *        chain permutations, composition and verification.
 *
 * Z is the rhombus with sides on K_0, K_0 + (0,1), K_theta and
 * K_theta + e^{i(theta+pi/2)}; L is its diagonal avoiding the origin. For a
 * permutation s of {1..n} (stored 1-based),
 *   M_{n,s,k}(A) = A/n - ((k-1)/n) / sin(theta) + ((s_k - 1)/n) e^{i theta} / sin(theta).
 */

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "specular/interval_set.hpp"
#include "specular/scene.hpp"

namespace specular {

using Permutation = std::vector<int>;  ///< s[k-1] = s_k, values in 1..n
using Quad = std::array<Point, 4>;

struct Rhombus {
    double theta{kPi / 2.0};
    /// (0,0), (cos/sin, 1), ((cos-1)/sin, 1), (-1/sin, 0): counter-clockwise.
    Quad vertices;

    double side() const { return 1.0 / std::sin(theta); }
    /// Length of the longer diagonal (the constant l).
    double longer_diagonal() const;
};

/// Throws Error(precondition) unless 0 < theta < pi.
Rhombus rhombus(double theta);
Segment diagonal_L(double theta);

/// True when s is a permutation of {1..n}.
bool is_permutation(const Permutation& s);

/// Translation part of M_{n,s,k}, k in 1..n.
Point map_offset(int n, const Permutation& s, int k, double theta);
/// M_{n,s}(segments): copy k of segment i is element (k-1)*m + i.
std::vector<Segment> apply_map(const Permutation& s, const std::vector<Segment>& segments, double theta);
/// M_{n,s}(Z): the n rhombi of Z_{n,s}, ordered by k.
std::vector<Quad> apply_map_rhombus(const Permutation& s, double theta);
/// M_{n,s}(quads) for already subdivided rhombi.
std::vector<Quad> apply_map(const Permutation& s, const std::vector<Quad>& quads, double theta);

/// Projection of a convex quadrilateral onto K_alpha.
Interval project_quad(const Quad& q, double alpha);
/// Leb(Pi_alpha of a union of quadrilaterals).
double shadow_of_quads(const std::vector<Quad>& quads, double alpha);
/// Leb(Pi_alpha Z_{n,s}).
double shadow_Z(const Permutation& s, double theta, double alpha);

/// True when x = (k1 + k2 e^{i theta}) / (n sin theta) for integers k1, k2 within tol.
bool on_lattice(Point x, int n, double theta, double tol = 1e-9);

struct ChainPermutation {
    int n{0};
    int k1{1};
    int k2{1};                  ///< may be negative (range mirrored)
    bool range_mirrored{false}; ///< built for (k1, -k2) and mapped j2 -> n + 1 - j2
    Permutation s;
    /// Chains in construction order; each lists (j1, j2) pairs from its root forward.
    std::vector<std::vector<std::pair<int, int>>> chains;
};

/**
 * @brief The minimal-root chain construction for a step (k1, k2).
 *
 * Requires k1 > 0, k2 != 0 and n1 > 2 k1 |k2|; allow_small lifts the size
 * bound (any n1 >= 1). Negative k2 is handled by building for |k2| and
 * mirroring the range.
 */
ChainPermutation chain_permutation(int n1, int k1, int k2, bool allow_small = false);

struct ChainCheck {
    bool bijective{false};
    bool orthogonal{false};
    bool maximal{false};
    bool forward_law{false};
    bool ok() const { return bijective && orthogonal && maximal && forward_law; }
};

/// Exhaustive check of the chain invariants.
ChainCheck check_chains(const ChainPermutation& c);

/// s3 with M_{n1,s1}(M_{n2,s2}(Z)) = Z_{n1 n2, s3}.
Permutation compose(const Permutation& s1, const Permutation& s2);

/// Smallest (k1 > 0, k2 != 0), max(|k1|,|k2|) <= k_max, with z = (-k1 + k2 e^{i theta})/sin(theta) within 1e-9 of K_{alpha - pi/2}.
std::optional<std::pair<int, int>> lattice_hit(double alpha, double theta, int k_max);

struct LatticeApprox {
    int k1{0};
    int k2{0};
    Point z;                       ///< (-k1 + k2 e^{i theta}) / (n sin theta)
    double alignment{0.0};         ///< |z . e^{i alpha}| / |z|, the sine of the angle to the line
};

/**
 * @brief First lattice point of L_{n,theta}, by increasing |k1| (hence norm), within delta |z| of K_{alpha - pi/2}.
 *
 * Throws Error(budget_exhausted) when none exists with |k1| <= 10^6.
 */
LatticeApprox nearest_lattice_approx(double alpha, double theta, int n, double delta);

/// Stage of the construction serving one target angle.
struct MirrorStage {
    double alpha{0.0};
    int k1{0}, k2{0};
    bool rational{false};
    double alignment{0.0};
    int n2{0};                  ///< required chain length, ceil(8 l / eps)
    int n1_designed{0};         ///< smallest n1 whose D1-rooted chains all reach n2 elements
    bool undersized{false};     ///< n1 capped below n1_designed by the budget
    ChainPermutation chain;
    double shadow{0.0};         ///< Leb(Pi_alpha Z_{n1,s})
    bool meets_half_eps{false}; ///< shadow < eps / 2
    double cover_lo{0.0}, cover_hi{0.0};  ///< alpha interval around alpha with shadow < eps
};

/// Per-stage construction: lattice step, n1 bookkeeping, chain permutation and coverage.
MirrorStage build_stage(double alpha, double theta, double eps, int n1_cap = 0, double delta = 1e-3);

struct MirrorPartOne {
    std::size_t n_rays{0};
    std::size_t one_bounce{0};
    std::size_t degenerate{0};
    std::size_t failures{0};       ///< non-degenerate rays violating any part-(i) condition
    double max_angle_error{0.0};
    double min_offset{0.0}, max_offset{0.0};
    std::vector<int> bounce_histogram;  ///< counts for 0, 1, 2, 3+ bounces
};

struct MirrorReport {
    double theta{0.0};
    double eps{0.0};
    std::vector<double> alpha_grid;
    std::vector<double> shadows;   ///< Leb(Pi_alpha G) per grid angle
    std::vector<char> covered;     ///< grid angle inside a composed stage's coverage
    std::vector<MirrorStage> stages;          ///< all stages considered
    std::vector<std::size_t> composed;        ///< indices of stages composed into G
    int n_star{1};
    std::size_t budget{0};
    bool budget_exhausted{false};  ///< some stage could not be composed
    MirrorPartOne part_one;
};

struct AlphaSpec {
    std::vector<double> explicit_alphas;  ///< when empty, cover the compact range
    int range_samples{64};                ///< grid resolution for the compact range
};

/// alpha grid for alpha - pi/2 in [eps, theta - eps] u [theta + eps, pi - eps].
std::vector<double> compact_alpha_range(double theta, double eps, int samples);

struct InvisibleMirror {
    Scene g;
    Permutation s_star;
    MirrorReport report;
};

/// Builds G = M_{n*,s*}(L) under a segment budget (default 10^6).
InvisibleMirror build_invisible_mirror(double theta, double eps, const AlphaSpec& alphas,
                                       std::size_t budget = 1000000, int threads = 0);

/// Part (i) ray checks and part (ii) shadows of a built G.
MirrorReport verify_mirror(const Scene& g, double theta, double eps, std::size_t n_rays,
                           const std::vector<double>& alpha_grid, int threads = 0);

}  // namespace specular
