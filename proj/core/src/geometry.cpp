/**
 * @file geometry.cpp
 * @brief Planar primitives: reflection and ray/segment intersection.
 */
#include "specular/geometry.hpp"

#include <algorithm>

namespace specular {

double wrap_angle(double angle) {
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

Direction Direction::from_angle(double angle) {
    const double a = wrap_angle(angle);
    return Direction(a, unit(a));
}

Direction Direction::from_vector(Point v) {
    const double n = v.norm();
    const Point u = v / n;
    return Direction(wrap_angle(std::atan2(u.y, u.x)), u);
}

DirectedLine DirectedLine::through(const Direction& v, Point through) {
    const Point& d = v.vec();
    return {v, through - d * d.dot(through)};
}

Point reflect_vector(Point v, Point m) {
    return m * (2.0 * v.dot(m)) - v;
}

Direction reflect_direction(const Direction& v, const Direction& m) {
    return Direction::from_vector(reflect_vector(v.vec(), m.vec()));
}

std::optional<Hit> ray_segment_hit(Point origin, const Direction& v, const Segment& s) {
    return ray_segment_hit(origin, v.vec(), s);
}

std::optional<Hit> ray_segment_hit(Point origin, Point d, const Segment& s) {
    const Point e = s.q - s.p;
    const double len = e.norm();
    const Point w0 = s.p - origin;
    const double denom = d.cross(e);

    // Parallel (or collinear) ray: only an endpoint can be reached.
    if (std::abs(denom) <= 1e-15 * len) {
        if (std::abs(w0.cross(d)) > kEpsGeom) return std::nullopt;
        const double tp = w0.dot(d);
        const double tq = (s.q - origin).dot(d);
        double t = -1.0;
        if (tp > kEpsGeom) t = tp;
        if (tq > kEpsGeom && (t < 0.0 || tq < t)) t = tq;
        if (t < 0.0) return std::nullopt;
        return Hit{t, origin + d * t, HitKind::endpoint};
    }

    const double t = w0.cross(e) / denom;
    if (!(t > kEpsGeom)) return std::nullopt;
    const double u = w0.cross(d) / denom;
    if (u * len < -kEpsGeom || (u - 1.0) * len > kEpsGeom) return std::nullopt;

    const Point x = origin + d * t;
    const bool near_end = u * len <= kEpsGeom || (1.0 - u) * len <= kEpsGeom ||
                          (x - s.p).norm() <= kEpsGeom || (x - s.q).norm() <= kEpsGeom;
    return Hit{t, x, near_end ? HitKind::endpoint : HitKind::interior};
}

}  // namespace specular
