#pragma once
/**
 * @file measure.hpp
 * @brief The measure nu2 on directed lines, stratified sampling of V and
 *        the invisibility report for a sea-urchin scene.
 *
 * A line (v, w) of V is parametrized by theta in [0, 2pi), r in [0, 1] and a
 * side: w = r e^{i theta}, v = e^{i(theta +- pi/2)}. nu2 is d theta dr on
 * each side, so nu2(V) = 4 pi.
 */

#include <cstdint>
#include <functional>
#include <vector>

#include "specular/geometry.hpp"
#include "specular/urchin.hpp"

namespace specular {

inline constexpr double kNu2Total = 4.0 * kPi;
/// Two-sided 95% normal quantile.
inline constexpr double kZ95 = 1.96;

struct LineSample {
    double theta{0.0};  ///< [0, 2pi)
    double r{0.0};      ///< [0, 1]
    int side{1};        ///< +1: v = e^{i(theta + pi/2)}, -1: v = e^{i(theta - pi/2)}
    double weight{0.0}; ///< nu2 mass carried by the sample, 4 pi / n

    Direction v() const { return Direction::from_angle(theta + side * kPi / 2.0); }
    Point w() const { return unit(theta) * r; }
    DirectedLine line() const { return DirectedLine{v(), w()}; }
};

/// Deterministic 64-bit seed for sample `index` of a stream seeded by `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/**
 * @brief n stratified samples of V.
 *
 * Sample i uses side (i even: +, odd: -) and theta stratum floor(i/2) of
 * ceil(n/2) equal strata of [0, 2pi); the offset within the stratum and r
 * come from a per-sample generator seeded by (seed, i).
 */
std::vector<LineSample> sample_lines(std::size_t n, std::uint64_t seed);

struct Nu2Estimate {
    double measure{0.0};   ///< 4 pi * fraction
    double ci{0.0};        ///< 95% half-width, 1.96 * 4 pi * sqrt(f (1 - f) / n)
    double fraction{0.0};
    std::size_t n{0};
};

/// Fraction-based nu2 estimate of an event with its normal-approximation CI.
Nu2Estimate nu2_from_count(std::size_t hits, std::size_t n);

/// nu2 of the event {(v, w): event(v, w)} estimated on the samples.
Nu2Estimate nu2_estimate(const std::vector<LineSample>& samples,
                         const std::function<bool(const Direction&, Point)>& event);

/// Empirical bundle bookkeeping for rays perpendicular to K_theta, theta in [0, theta1].
struct BundleLedger {
    std::size_t n_samples{0};
    double b6{0.0};              ///< nu2 of the bundle, 2 theta1
    double b6_minus_b7{0.0};     ///< rays missing F
    double b7_minus_b8{0.0};     ///< rays hitting F outside M_0 (spikes 0 and N/2) first
    double b6_minus_b8{0.0};
    double b6_minus_b9{0.0};     ///< additionally: exit from M_0 turned or displaced beyond eps
    double b6_minus_b10{0.0};    ///< additionally: exit line meets F outside M_0
    double b6_minus_b11{0.0};    ///< equals b6_minus_b10 by conservation
    double miss_spike0{0.0};     ///< rays whose line misses F_0, the mirrors of M_0
    double nu2_miss_own_spike{0.0};  ///< N * miss_spike0, an upper bound for nu2 of lines missing F
    std::size_t degenerate{0};
    /// Reference values eps/(8N), 3 eps/(8N), 4 eps/(8N), 6 eps/(8N).
    double ref_b6_minus_b7{0.0}, ref_b6_minus_b8{0.0}, ref_b6_minus_b9{0.0}, ref_b6_minus_b10{0.0};
};

struct Theorem1Report {
    std::size_t n_samples{0};
    std::uint64_t seed{0};
    double eps{0.0};
    int cap{0};
    double hit_fraction{0.0};
    double same_direction_fraction{0.0};   ///< among hit, non-degenerate rays
    double displacement_median{0.0};       ///< |w - w1| among hit, non-degenerate rays
    double displacement_p90{0.0};
    double displacement_max{0.0};
    double small_displacement_fraction{0.0};  ///< |w - w1| <= eps among hit, non-degenerate rays
    double good_fraction{0.0};             ///< hit, same direction and |w - w1| <= eps, over all samples
    std::size_t hits{0};
    std::size_t degenerate{0};
    std::size_t cap_exceeded{0};
    double hit_ci{0.0};                    ///< 95% half-widths of the fractions
    double same_direction_ci{0.0};
    double good_ci{0.0};
    double nu2_not_good{0.0};              ///< 4 pi (1 - good_fraction)
    BundleLedger bundles;
};

/**
 * @brief Traces n stratified samples of V through the urchin and aggregates.
 *
 * Per-sample work is independent and seeded by (seed, index), so results do
 * not depend on the thread count. bundle_samples = 0 skips the bundle ledger.
 */
Theorem1Report theorem1_report(const UrchinScene& urchin, const UrchinParams& params, double eps, std::size_t n,
                               std::uint64_t seed, int threads = 0, int cap = 10000,
                               std::size_t bundle_samples = 0);

/// Same statistics for an arbitrary scene (no bundle ledger).
Theorem1Report theorem1_report(const Scene& scene, double eps, std::size_t n, std::uint64_t seed, int threads = 0,
                               int cap = 10000);

}  // namespace specular
