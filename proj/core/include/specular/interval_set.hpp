#pragma once
/**
 * @file interval_set.hpp
 * @brief Finite unions of disjoint closed intervals on a line, with exact measure.
 *
 * Invariants of a normalized set:
 *   - intervals sorted, lo <= hi for each,
 *   - consecutive intervals separated by a gap of at least kMergeGap.
 * Set operations are single sweeps over the sorted boundaries.
 */

#include <span>
#include <vector>

namespace specular {

/// Intervals closer than this are merged during normalization.
inline constexpr double kMergeGap = 1e-12;

struct Interval {
    double lo{0.0};
    double hi{0.0};

    double length() const { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

class IntervalSet {
public:
    IntervalSet() = default;
    /// Normalizes an arbitrary list (any order, overlaps allowed). Reversed pairs are swapped.
    explicit IntervalSet(std::vector<Interval> raw);
    IntervalSet(std::initializer_list<Interval> raw) : IntervalSet(std::vector<Interval>(raw)) {}

    const std::vector<Interval>& intervals() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }
    /// Sum of interval lengths.
    double measure() const;
    bool contains(double x) const;

    IntervalSet unite(const IntervalSet& other) const;
    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet symmetric_difference(const IntervalSet& other) const;
    IntervalSet difference(const IntervalSet& other) const;

    /// True when both sets have the same number of intervals and every endpoint agrees within tol.
    bool approx_equal(const IntervalSet& other, double tol) const;

    bool operator==(const IntervalSet&) const = default;

private:
    std::vector<Interval> parts_;
};

/// Measure of the union of the given intervals without materializing the set.
double union_measure(std::span<Interval> raw);

}  // namespace specular
