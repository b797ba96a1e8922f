/**
 * @file scene.cpp
 * @brief Scene metadata, bounds and rigid transforms.
 */
#include "specular/scene.hpp"

#include <algorithm>
#include <limits>

namespace specular {

std::string Scene::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return {};
}

void Scene::set_meta(const std::string& key, const std::string& value) {
    for (auto& [k, v] : metadata) {
        if (k == key) {
            v = value;
            return;
        }
    }
    metadata.emplace_back(key, value);
}

BoundingBox Scene::bounds() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox b{{inf, inf}, {-inf, -inf}};
    for (const auto& s : segments) {
        for (const Point& p : {s.p, s.q}) {
            b.lo.x = std::min(b.lo.x, p.x);
            b.lo.y = std::min(b.lo.y, p.y);
            b.hi.x = std::max(b.hi.x, p.x);
            b.hi.y = std::max(b.hi.y, p.y);
        }
    }
    return b;
}

double Scene::diameter() const {
    // Diameter over the convex hull of all endpoints.
    std::vector<Point> pts;
    pts.reserve(2 * segments.size());
    for (const auto& s : segments) {
        pts.push_back(s.p);
        pts.push_back(s.q);
    }
    if (pts.size() < 2) return 0.0;
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    // Andrew monotone chain.
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[i - 1] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k > 1 ? k - 1 : k);
    double best = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.size(); ++j) {
            best = std::max(best, (hull[i] - hull[j]).norm());
        }
    }
    return best;
}

double Scene::total_length() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.length();
    return t;
}

Scene scaled(const Scene& s, double factor) {
    Scene out = s;
    for (auto& seg : out.segments) {
        seg.p = seg.p * factor;
        seg.q = seg.q * factor;
    }
    return out;
}

Scene translated(const Scene& s, Point offset) {
    Scene out = s;
    for (auto& seg : out.segments) {
        seg.p += offset;
        seg.q += offset;
    }
    return out;
}

Scene rotated(const Scene& s, double phi) {
    Scene out = s;
    for (auto& seg : out.segments) {
        seg.p = seg.p.rotated(phi);
        seg.q = seg.q.rotated(phi);
    }
    return out;
}

Scene merged(const Scene& a, const Scene& b) {
    Scene out = a;
    out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
    return out;
}

}  // namespace specular
