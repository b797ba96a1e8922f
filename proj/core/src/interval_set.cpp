/**
 * @file interval_set.cpp
 * @brief Sweep-line set operations on sorted interval lists.
 */
#include "specular/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace specular {

namespace {

std::vector<Interval> normalize(std::vector<Interval> raw) {
    for (auto& iv : raw) {
        if (iv.hi < iv.lo) std::swap(iv.lo, iv.hi);
    }
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::vector<Interval> out;
    out.reserve(raw.size());
    for (const auto& iv : raw) {
        if (!out.empty() && iv.lo - out.back().hi < kMergeGap) {
            out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
            out.push_back(iv);
        }
    }
    return out;
}

/// Generic boolean sweep: keep points where keep(in_a, in_b) holds.
template <class Keep>
IntervalSet sweep(const std::vector<Interval>& a, const std::vector<Interval>& b, Keep keep) {
    struct Event {
        double x;
        int set;
        int delta;
    };
    std::vector<Event> ev;
    ev.reserve(2 * (a.size() + b.size()));
    for (const auto& iv : a) {
        ev.push_back({iv.lo, 0, +1});
        ev.push_back({iv.hi, 0, -1});
    }
    for (const auto& iv : b) {
        ev.push_back({iv.lo, 1, +1});
        ev.push_back({iv.hi, 1, -1});
    }
    std::sort(ev.begin(), ev.end(), [](const Event& l, const Event& r) { return l.x < r.x; });

    std::vector<Interval> out;
    int depth[2] = {0, 0};
    bool inside = false;
    double start = 0.0;
    std::size_t i = 0;
    while (i < ev.size()) {
        const double x = ev[i].x;
        while (i < ev.size() && ev[i].x == x) {
            depth[ev[i].set] += ev[i].delta;
            ++i;
        }
        const bool now = keep(depth[0] > 0, depth[1] > 0);
        if (now && !inside) {
            start = x;
        } else if (!now && inside) {
            out.push_back({start, x});
        }
        inside = now;
    }
    return IntervalSet(std::move(out));
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> raw) : parts_(normalize(std::move(raw))) {}

double IntervalSet::measure() const {
    double m = 0.0;
    for (const auto& iv : parts_) m += iv.length();
    return m;
}

bool IntervalSet::contains(double x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == parts_.begin()) return false;
    --it;
    return x <= it->hi;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
    std::vector<Interval> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        const double lo = std::max(parts_[i].lo, other.parts_[j].lo);
        const double hi = std::min(parts_[i].hi, other.parts_[j].hi);
        if (lo <= hi) out.push_back({lo, hi});
        if (parts_[i].hi < other.parts_[j].hi) {
            ++i;
        } else {
            ++j;
        }
    }
    return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::symmetric_difference(const IntervalSet& other) const {
    return sweep(parts_, other.parts_, [](bool a, bool b) { return a != b; });
}

IntervalSet IntervalSet::difference(const IntervalSet& other) const {
    return sweep(parts_, other.parts_, [](bool a, bool b) { return a && !b; });
}

bool IntervalSet::approx_equal(const IntervalSet& other, double tol) const {
    if (parts_.size() != other.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (std::abs(parts_[i].lo - other.parts_[i].lo) > tol) return false;
        if (std::abs(parts_[i].hi - other.parts_[i].hi) > tol) return false;
    }
    return true;
}

double union_measure(std::span<Interval> raw) {
    if (raw.empty()) return 0.0;
    std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double total = 0.0;
    double lo = raw[0].lo, hi = raw[0].hi;
    for (std::size_t i = 1; i < raw.size(); ++i) {
        if (raw[i].lo > hi) {
            total += hi - lo;
            lo = raw[i].lo;
            hi = raw[i].hi;
        } else if (raw[i].hi > hi) {
            hi = raw[i].hi;
        }
    }
    return total + (hi - lo);
}

}  // namespace specular
