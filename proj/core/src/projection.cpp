/**
 * @file projection.cpp
 * @brief Shadow measures and grid estimates of bad-angle sets.
 */
#include "specular/projection.hpp"

#include <algorithm>
#include <cmath>

#include "specular/error.hpp"
#include "specular/parallel.hpp"

namespace specular {

namespace {

std::vector<Interval>& scratch() {
    thread_local std::vector<Interval> buf;
    return buf;
}

void fill_projection(std::span<const Segment> segments, double theta, std::vector<Interval>& out) {
    const double c = std::cos(theta), s = std::sin(theta);
    out.resize(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const double a = segments[i].p.x * c + segments[i].p.y * s;
        const double b = segments[i].q.x * c + segments[i].q.y * s;
        out[i] = a < b ? Interval{a, b} : Interval{b, a};
    }
}

}  // namespace

Interval project_segment(const Segment& seg, double theta) {
    const Point u = unit(theta);
    const double a = seg.p.dot(u), b = seg.q.dot(u);
    return a < b ? Interval{a, b} : Interval{b, a};
}

IntervalSet project_segments(std::span<const Segment> segments, double theta) {
    std::vector<Interval> raw;
    fill_projection(segments, theta, raw);
    return IntervalSet(std::move(raw));
}

IntervalSet project_scene(const Scene& scene, double theta) {
    return project_segments(scene.segments, theta);
}

double shadow_measure(std::span<const Segment> segments, double theta) {
    auto& buf = scratch();
    fill_projection(segments, theta, buf);
    return union_measure(buf);
}

double symdiff_measure(std::span<const Segment> segments, double theta, double rho) {
    if (segments.empty()) return rho;
    auto& buf = scratch();
    fill_projection(segments, theta, buf);
    std::sort(buf.begin(), buf.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    // |U xor [0,rho]| = |U| + rho - 2 |U n [0,rho]|, accumulated over merged runs.
    double total = 0.0, inside = 0.0;
    auto flush = [&](double lo, double hi) {
        total += hi - lo;
        const double a = std::max(lo, 0.0), b = std::min(hi, rho);
        if (b > a) inside += b - a;
    };
    double lo = buf[0].lo, hi = buf[0].hi;
    for (std::size_t i = 1; i < buf.size(); ++i) {
        if (buf[i].lo > hi) {
            flush(lo, hi);
            lo = buf[i].lo;
            hi = buf[i].hi;
        } else if (buf[i].hi > hi) {
            hi = buf[i].hi;
        }
    }
    flush(lo, hi);
    return total + rho - 2.0 * inside;
}

std::vector<double> angle_grid(double theta_a, double theta_b, double grid_step) {
    const auto count = static_cast<std::size_t>(std::floor((theta_b - theta_a) / grid_step + 1e-9));
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = theta_a + (static_cast<double>(i) + 0.5) * grid_step;
    }
    return grid;
}

BadAngleResult bad_angle_measure(double theta_a, double theta_b,
                                 const std::function<bool(double)>& passes, double grid_step,
                                 int threads) {
    require(theta_a < theta_b, "bad_angle_measure: empty angle range");
    require(grid_step > 0.0, "bad_angle_measure: grid_step must be positive");
    require(grid_step <= (theta_b - theta_a) / 100.0 * (1.0 + 1e-12),
            "bad_angle_measure: grid_step must be at most 1/100 of the range");
    const auto grid = angle_grid(theta_a, theta_b, grid_step);
    std::vector<char> ok(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t i) { ok[i] = passes(grid[i]) ? 1 : 0; }, threads);

    BadAngleResult r;
    r.grid_step = grid_step;
    r.grid_points = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!ok[i]) r.bad_list.push_back(grid[i]);
    }
    r.estimate = grid_step * static_cast<double>(r.bad_list.size());
    return r;
}

}  // namespace specular
