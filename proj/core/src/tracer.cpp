/**
 * @file tracer.cpp
 * @brief Grid-accelerated nearest-hit queries, path tracing and bundle transport.
 */
#include "specular/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specular/error.hpp"
#include "specular/parallel.hpp"

namespace specular {

namespace {

constexpr std::size_t kBruteForceLimit = 16;

/// Keeps the nearer of two hits; hits closer than kEpsGeom merge into an endpoint hit.
void consider(std::optional<SceneIndex::Found>& best, const Hit& h, std::size_t idx) {
    if (!best || h.t < best->hit.t) {
        const bool tie_endpoint = best && best->hit.kind == HitKind::endpoint && best->hit.t - h.t <= kEpsGeom;
        best = SceneIndex::Found{h, idx};
        if (tie_endpoint) best->hit.kind = HitKind::endpoint;
    } else if (h.t - best->hit.t <= kEpsGeom && h.kind == HitKind::endpoint) {
        best->hit.kind = HitKind::endpoint;
    }
}

}  // namespace

const char* to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::ok: return "ok";
        case TraceStatus::degenerate: return "degenerate";
        case TraceStatus::cap_exceeded: return "cap-exceeded";
    }
    return "unknown";
}

SceneIndex::SceneIndex(std::vector<Segment> segments) : segs_(std::move(segments)) {
    if (segs_.empty()) return;
    Scene tmp;
    tmp.segments = segs_;
    box_ = tmp.bounds();
    for (const auto& s : segs_) radius_ = std::max({radius_, s.p.norm(), s.q.norm()});
    if (segs_.size() <= kBruteForceLimit) return;

    const double span = std::max(box_.width(), box_.height());
    const double pad = 1e-6 * std::max(span, 1.0);
    box_.lo -= Point(pad, pad);
    box_.hi += Point(pad, pad);
    const double w = box_.width(), h = box_.height();
    const double target = 2.0 * static_cast<double>(segs_.size());
    const double aspect = w / h;
    nx_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(target * aspect))), 1, 4096);
    ny_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(target / aspect))), 1, 4096);
    cw_ = w / nx_;
    ch_ = h / ny_;

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(3 * segs_.size());
    std::vector<std::uint32_t> cells;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        cells.clear();
        cell_range_of_segment(segs_[i], cells);
        for (auto c : cells) pairs.emplace_back(c, static_cast<std::uint32_t>(i));
    }
    std::sort(pairs.begin(), pairs.end());
    cell_start_.assign(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
    for (const auto& pr : pairs) ++cell_start_[pr.first + 1];
    for (std::size_t c = 1; c < cell_start_.size(); ++c) cell_start_[c] += cell_start_[c - 1];
    cell_items_.resize(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) cell_items_[k] = pairs[k].second;
}

void SceneIndex::cell_range_of_segment(const Segment& s, std::vector<std::uint32_t>& cells) const {
    const double pad = 4.0 * kEpsGeom + 1e-9 * std::max(cw_, ch_);
    auto col = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - box_.lo.x) / cw_)), 0, nx_ - 1); };
    auto row = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - box_.lo.y) / ch_)), 0, ny_ - 1); };
    const double xmin = std::min(s.p.x, s.q.x), xmax = std::max(s.p.x, s.q.x);
    const int c0 = col(xmin - pad), c1 = col(xmax + pad);
    const double dx = s.q.x - s.p.x, dy = s.q.y - s.p.y;
    for (int c = c0; c <= c1; ++c) {
        const double x0 = std::max(box_.lo.x + c * cw_, xmin) - pad;
        const double x1 = std::min(box_.lo.x + (c + 1) * cw_, xmax) + pad;
        double ylo, yhi;
        if (std::abs(dx) < 1e-300) {
            ylo = std::min(s.p.y, s.q.y);
            yhi = std::max(s.p.y, s.q.y);
        } else {
            const double ta = std::clamp((x0 - s.p.x) / dx, 0.0, 1.0);
            const double tb = std::clamp((x1 - s.p.x) / dx, 0.0, 1.0);
            const double ya = s.p.y + ta * dy, yb = s.p.y + tb * dy;
            ylo = std::min(ya, yb);
            yhi = std::max(ya, yb);
        }
        const int r0 = row(ylo - pad), r1 = row(yhi + pad);
        for (int r = r0; r <= r1; ++r) cells.push_back(static_cast<std::uint32_t>(r * nx_ + c));
    }
}

std::optional<SceneIndex::Found> SceneIndex::brute_force(Point origin, Point d) const {
    std::optional<Found> best;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (auto h = ray_segment_hit(origin, d, segs_[i])) consider(best, *h, i);
    }
    return best;
}

std::optional<SceneIndex::Found> SceneIndex::nearest_hit(Point origin, Point d) const {
    if (segs_.empty()) return std::nullopt;
    if (nx_ == 0) return brute_force(origin, d);

    constexpr double inf = std::numeric_limits<double>::infinity();
    // Slab clipping against the grid box.
    double t0 = 0.0, t1 = inf;
    const double o[2] = {origin.x, origin.y}, dv[2] = {d.x, d.y};
    const double lo[2] = {box_.lo.x, box_.lo.y}, hi[2] = {box_.hi.x, box_.hi.y};
    for (int a = 0; a < 2; ++a) {
        if (std::abs(dv[a]) < 1e-300) {
            if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
            continue;
        }
        double ta = (lo[a] - o[a]) / dv[a], tb = (hi[a] - o[a]) / dv[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (t0 > t1) return std::nullopt;

    const Point p0 = origin + d * t0;
    int cx = std::clamp(static_cast<int>(std::floor((p0.x - box_.lo.x) / cw_)), 0, nx_ - 1);
    int cy = std::clamp(static_cast<int>(std::floor((p0.y - box_.lo.y) / ch_)), 0, ny_ - 1);
    const int sx = d.x > 0 ? 1 : -1, sy = d.y > 0 ? 1 : -1;
    const double dtx = std::abs(d.x) < 1e-300 ? inf : cw_ / std::abs(d.x);
    const double dty = std::abs(d.y) < 1e-300 ? inf : ch_ / std::abs(d.y);
    double tmx = std::abs(d.x) < 1e-300 ? inf
                 : ((box_.lo.x + (cx + (sx > 0 ? 1 : 0)) * cw_) - origin.x) / d.x;
    double tmy = std::abs(d.y) < 1e-300 ? inf
                 : ((box_.lo.y + (cy + (sy > 0 ? 1 : 0)) * ch_) - origin.y) / d.y;

    std::optional<Found> best;
    while (true) {
        const std::size_t cell = static_cast<std::size_t>(cy) * nx_ + cx;
        for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
            const std::uint32_t i = cell_items_[k];
            if (auto h = ray_segment_hit(origin, d, segs_[i])) consider(best, *h, i);
        }
        const double t_exit = std::min(tmx, tmy);
        if (best && best->hit.t <= t_exit) break;
        if (t_exit > t1) break;
        if (tmx < tmy) {
            cx += sx;
            tmx += dtx;
            if (cx < 0 || cx >= nx_) break;
        } else {
            cy += sy;
            tmy += dty;
            if (cy < 0 || cy >= ny_) break;
        }
    }
    return best;
}

RayPath trace_from(const SceneIndex& index, Point origin, const Direction& v, int cap) {
    require(cap >= 1, "trace: cap must be at least 1");
    RayPath path;
    path.start = origin;
    path.entry = DirectedLine::through(v, origin);
    Point d = v.vec();
    Point pos = origin;
    while (true) {
        const auto f = index.nearest_hit(pos, d);
        if (!f) break;
        if (f->hit.kind == HitKind::endpoint) {
            path.reflections.push_back(f->hit.point);
            path.hit_segments.push_back(f->segment);
            pos = f->hit.point;
            path.status = TraceStatus::degenerate;
            break;
        }
        if (path.bounces >= cap) {
            path.status = TraceStatus::cap_exceeded;
            break;
        }
        const Segment& s = index.segments()[f->segment];
        const Point m = s.direction_vector() / s.length();
        d = reflect_vector(d, m);
        d = d / d.norm();
        path.reflections.push_back(f->hit.point);
        path.hit_segments.push_back(f->segment);
        path.outgoing.push_back(d);
        ++path.bounces;
        pos = f->hit.point + d * kEpsGeom;
    }
    path.exit = DirectedLine::through(Direction::from_vector(d), pos);
    return path;
}

RayPath trace(const SceneIndex& index, const Direction& v, Point w, int cap) {
    const double reach = std::max(index.radius(), w.norm()) + 1.0;
    RayPath path = trace_from(index, w - v.vec() * reach, v, cap);
    path.entry = DirectedLine::through(v, w);
    if (path.bounces == 0 && path.status == TraceStatus::ok) path.exit = path.entry;
    return path;
}

RayPath trace(const Scene& scene, const Direction& v, Point w, int cap) {
    const SceneIndex index(scene);
    return trace(index, v, w, cap);
}

double BundleTransportResult::imbalance() const { return std::abs(b2 + b3 - b1); }

BundleTransportResult bundle_transport(const Scene& scene, double theta, const IntervalSet& b1,
                                       std::size_t n_rays, int threads) {
    require(n_rays >= 1, "bundle_transport: n_rays must be positive");
    const SceneIndex index(scene);
    BundleTransportResult res;
    res.theta = theta;
    res.n_rays = n_rays;
    res.b1 = b1.measure();
    res.b2_direction = Direction::from_angle(theta + kPi / 2.0);
    res.b3_direction = Direction::from_angle(kPi - theta);
    const double cell = res.b1 / static_cast<double>(n_rays);
    if (!(cell > 0.0)) return res;

    // Offsets at cumulative-measure midpoints.
    std::vector<double> offsets(n_rays);
    const auto& parts = b1.intervals();
    std::size_t piece = 0;
    double before = 0.0;
    for (std::size_t k = 0; k < n_rays; ++k) {
        const double target = (static_cast<double>(k) + 0.5) * cell;
        while (piece + 1 < parts.size() && target > before + parts[piece].length()) {
            before += parts[piece].length();
            ++piece;
        }
        offsets[k] = parts[piece].lo + std::min(target - before, parts[piece].length());
    }

    const Point u = unit(theta);
    const Point u3 = unit(kPi / 2.0 - theta);
    const Point v2 = res.b2_direction.vec(), v3 = res.b3_direction.vec();
    enum Kind : char { same, reflected, mixed, degenerate, capped };
    std::vector<Kind> kind(n_rays);
    std::vector<double> exit_offset(n_rays, 0.0);
    parallel_for(n_rays, [&](std::size_t i) {
        const RayPath path = trace(index, res.b2_direction, u * offsets[i]);
        if (path.status == TraceStatus::degenerate) {
            kind[i] = degenerate;
        } else if (path.status == TraceStatus::cap_exceeded) {
            kind[i] = capped;
        } else if ((path.exit.v.vec() - v2).norm() <= 1e-9) {
            kind[i] = same;
            exit_offset[i] = path.exit.w.dot(u);
        } else if ((path.exit.v.vec() - v3).norm() <= 1e-9) {
            kind[i] = reflected;
            exit_offset[i] = path.exit.w.dot(u3);
        } else {
            kind[i] = mixed;
        }
    }, threads);

    std::vector<Interval> cells2, cells3;
    std::vector<double> o2, o3;
    for (std::size_t i = 0; i < n_rays; ++i) {
        const Interval c{exit_offset[i] - cell / 2.0, exit_offset[i] + cell / 2.0};
        switch (kind[i]) {
            case same: cells2.push_back(c); o2.push_back(exit_offset[i]); break;
            case reflected: cells3.push_back(c); o3.push_back(exit_offset[i]); break;
            case mixed: ++res.mixed_direction; break;
            case degenerate: ++res.degenerate; break;
            case capped: ++res.cap_exceeded; break;
        }
    }
    res.b2 = cell * static_cast<double>(o2.size());
    res.b3 = cell * static_cast<double>(o3.size());
    res.b2_set = IntervalSet(std::move(cells2));
    res.b3_set = IntervalSet(std::move(cells3));
    for (auto* o : {&o2, &o3}) {
        std::sort(o->begin(), o->end());
        for (std::size_t i = 1; i < o->size(); ++i) {
            if ((*o)[i] - (*o)[i - 1] <= kEpsGeom) ++res.duplicate_exits;
        }
    }
    return res;
}

}  // namespace specular
