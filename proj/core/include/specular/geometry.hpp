#pragma once
/**
 * @file geometry.hpp
 * @brief Planar primitives: points, unit directions, segments, directed lines,
 *        ray/segment intersection and specular reflection.
 *
 * The plane is identified with the complex numbers; a point is a pair of
 * doubles and a direction is a unit vector together with its polar angle.
 *
 * Contracts:
 *   - All geometric predicates share the single tolerance kEpsGeom.
 *   - A hit closer than kEpsGeom to a segment endpoint is reported as an
 *     endpoint hit; callers treat such rays as degenerate.
 */

#include <cmath>
#include <numbers>
#include <optional>

namespace specular {

/// Geometric tolerance in scene units used by every predicate.
inline constexpr double kEpsGeom = 1e-9;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// @brief Point or free vector in the plane.
struct Point {
    double x{0.0};
    double y{0.0};

    constexpr Point() = default;
    constexpr Point(double X, double Y) : x(X), y(Y) {}

    constexpr Point operator+(const Point& r) const { return {x + r.x, y + r.y}; }
    constexpr Point operator-(const Point& r) const { return {x - r.x, y - r.y}; }
    constexpr Point operator-() const { return {-x, -y}; }
    constexpr Point operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Point operator*(double s, const Point& p) { return {p.x * s, p.y * s}; }
    constexpr Point operator/(double s) const { return {x / s, y / s}; }
    Point& operator+=(const Point& r) { x += r.x; y += r.y; return *this; }
    Point& operator-=(const Point& r) { x -= r.x; y -= r.y; return *this; }

    constexpr bool operator==(const Point&) const = default;

    /// Dot product.
    constexpr double dot(const Point& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product.
    constexpr double cross(const Point& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    /// Counter-clockwise rotation by angle phi (multiplication by e^{i phi}).
    Point rotated(double phi) const {
        const double c = std::cos(phi), s = std::sin(phi);
        return {c * x - s * y, s * x + c * y};
    }
};

/// Unit vector e^{i angle}.
inline Point unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into [0, 2pi).
double wrap_angle(double angle);

/// @brief Unit direction with its polar angle in [0, 2pi).
class Direction {
public:
    Direction() : angle_(0.0), vec_(1.0, 0.0) {}
    /// Direction e^{i angle}.
    static Direction from_angle(double angle);
    /// Direction of a non-zero vector (normalized here).
    static Direction from_vector(Point v);

    double angle() const { return angle_; }
    const Point& vec() const { return vec_; }
    double x() const { return vec_.x; }
    double y() const { return vec_.y; }
    Direction reversed() const { return from_vector(-vec_); }

private:
    Direction(double a, Point v) : angle_(a), vec_(v) {}
    double angle_;
    Point vec_;
};

/// @brief Closed segment [p, q]; the atomic mirror.
struct Segment {
    Point p;
    Point q;

    double length() const { return (q - p).norm(); }
    Point direction_vector() const { return q - p; }
    Point midpoint() const { return (p + q) * 0.5; }
    bool operator==(const Segment&) const = default;
};

/// @brief Directed line t -> t v + w with w the foot of the perpendicular from 0.
struct DirectedLine {
    Direction v;
    Point w;

    /// Builds the canonical representation of the line through `through` with direction v.
    static DirectedLine through(const Direction& v, Point through);
    /// True when v . w = 0 within kEpsGeom.
    bool canonical() const { return std::abs(v.vec().dot(w)) <= kEpsGeom; }
};

enum class HitKind { interior, endpoint };

struct Hit {
    double t{0.0};
    Point point;
    HitKind kind{HitKind::interior};
};

/// Specular reflection of v across the mirror direction m: 2(v.m)m - v.
Direction reflect_direction(const Direction& v, const Direction& m);
/// Same formula on raw vectors; m must be a unit vector.
Point reflect_vector(Point v, Point m);

/**
 * @brief First intersection of the ray origin + t v (t > kEpsGeom) with s.
 *
 * Returns std::nullopt when the ray misses. A hit within kEpsGeom of s.p or
 * s.q is tagged HitKind::endpoint. A ray running along a collinear segment
 * reports the nearer endpoint ahead of it as an endpoint hit.
 */
std::optional<Hit> ray_segment_hit(Point origin, const Direction& v, const Segment& s);
/// Variant taking a raw unit vector.
std::optional<Hit> ray_segment_hit(Point origin, Point v, const Segment& s);

}  // namespace specular
