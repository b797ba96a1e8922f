/**
 * @file test_geometry.cpp
 * @brief Reflection, directions, canonical lines and ray/segment intersection.
 */
#include <doctest.h>

#include <cmath>
#include <random>

#include "specular/geometry.hpp"
#include "support.hpp"

using namespace specular;
using specular::testing::uniform;

namespace {

/// Independent intersection oracle: solves origin + t v = p + u (q - p) in long double.
std::optional<std::pair<long double, long double>> solve(Point o, Point v, const Segment& s) {
    const long double dx = s.q.x - s.p.x, dy = s.q.y - s.p.y;
    const long double det = static_cast<long double>(v.x) * -dy - static_cast<long double>(v.y) * -dx;
    if (std::fabs(det) < 1e-15L) return std::nullopt;
    const long double rx = s.p.x - o.x, ry = s.p.y - o.y;
    const long double t = (rx * -dy - ry * -dx) / det;
    const long double u = (static_cast<long double>(v.x) * ry - static_cast<long double>(v.y) * rx) / det;
    return std::make_pair(t, u);
}

}  // namespace

TEST_CASE("reflection on a slope -1 mirror sends (1,0) to (0,-1)") {
    const Direction m = Direction::from_vector(Point(1.0, -1.0));
    const Direction r = reflect_direction(Direction::from_angle(0.0), m);
    CHECK(std::abs(r.x()) <= 1e-12);
    CHECK(std::abs(r.y() + 1.0) <= 1e-12);
}

TEST_CASE("reflection examples on axis mirrors") {
    const Direction horizontal = Direction::from_angle(0.0);
    const Direction v = Direction::from_vector(Point(1.0, 1.0));
    const Direction r = reflect_direction(v, horizontal);
    CHECK(std::abs(r.x() - std::sqrt(0.5)) <= 1e-12);
    CHECK(std::abs(r.y() + std::sqrt(0.5)) <= 1e-12);
    const Point raw = reflect_vector(Point(0.0, 1.0), Point(0.0, 1.0));
    CHECK(std::abs(raw.x) <= 1e-15);
    CHECK(std::abs(raw.y - 1.0) <= 1e-15);
}

TEST_CASE("the slope -1 mirror maps e^{i(theta+pi/2)} to e^{i(pi-theta)}") {
    const Direction m = Direction::from_angle(-kPi / 4.0);
    for (double theta = 0.0; theta < kPi; theta += 0.1) {
        const Direction r = reflect_direction(Direction::from_angle(theta + kPi / 2.0), m);
        const Point expected = unit(kPi - theta);
        CHECK((r.vec() - expected).norm() <= 1e-12);
    }
}

TEST_CASE("reflection is an isometric involution") {
    std::mt19937_64 g(7);
    for (int i = 0; i < 10000; ++i) {
        const Direction v = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        const Direction m = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        const Direction once = reflect_direction(v, m);
        const Direction twice = reflect_direction(once, m);
        REQUIRE((twice.vec() - v.vec()).norm() <= 1e-12);
        REQUIRE(std::abs(once.vec().norm() - 1.0) <= 1e-12);
        // The mirror direction bisects v and its image.
        REQUIRE(std::abs(once.vec().dot(m.vec()) - v.vec().dot(m.vec())) <= 1e-12);
    }
}

TEST_CASE("angles wrap into [0, 2pi)") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
    CHECK(wrap_angle(-kPi / 2.0) == doctest::Approx(1.5 * kPi));
    CHECK(wrap_angle(5.0 * kPi) == doctest::Approx(kPi));
    std::mt19937_64 g(3);
    for (int i = 0; i < 1000; ++i) {
        const double a = wrap_angle(uniform(g, -100.0, 100.0));
        CHECK(a >= 0.0);
        CHECK(a < kTwoPi);
    }
}

TEST_CASE("directions keep angle and vector consistent") {
    const Direction d = Direction::from_vector(Point(0.0, -3.0));
    CHECK(d.angle() == doctest::Approx(1.5 * kPi));
    CHECK(d.vec().norm() == doctest::Approx(1.0));
    const Direction r = d.reversed();
    CHECK(r.angle() == doctest::Approx(0.5 * kPi));
}

TEST_CASE("canonical directed lines have w orthogonal to v") {
    std::mt19937_64 g(11);
    for (int i = 0; i < 1000; ++i) {
        const Direction v = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        const Point p(uniform(g, -5.0, 5.0), uniform(g, -5.0, 5.0));
        const DirectedLine l = DirectedLine::through(v, p);
        CHECK(l.canonical());
        // p lies on the line: (p - w) is parallel to v.
        CHECK(std::abs((p - l.w).cross(v.vec())) <= 1e-9);
    }
    const DirectedLine l = DirectedLine::through(Direction::from_angle(0.0), Point(3.0, 2.0));
    CHECK(l.w.x == doctest::Approx(0.0));
    CHECK(l.w.y == doctest::Approx(2.0));
}

TEST_CASE("ray/segment hit examples") {
    const Segment s{Point(1.0, -1.0), Point(1.0, 1.0)};
    const auto h = ray_segment_hit(Point(0.0, 0.0), Direction::from_angle(0.0), s);
    REQUIRE(h);
    CHECK(h->t == doctest::Approx(1.0));
    CHECK(h->kind == HitKind::interior);
    CHECK(h->point.x == doctest::Approx(1.0));

    CHECK_FALSE(ray_segment_hit(Point(0.0, 0.0), Direction::from_angle(kPi), s));
    CHECK_FALSE(ray_segment_hit(Point(0.0, 2.0), Direction::from_angle(0.0), s));

    const auto e = ray_segment_hit(Point(0.0, 1.0), Direction::from_angle(0.0), s);
    REQUIRE(e);
    CHECK(e->kind == HitKind::endpoint);

    // A ray starting on the segment does not hit it again.
    CHECK_FALSE(ray_segment_hit(Point(1.0, 0.0), Direction::from_angle(0.0), s));
}

TEST_CASE("a collinear ray reports the nearer endpoint ahead") {
    const Segment s{Point(2.0, 0.0), Point(5.0, 0.0)};
    const auto h = ray_segment_hit(Point(0.0, 0.0), Direction::from_angle(0.0), s);
    REQUIRE(h);
    CHECK(h->kind == HitKind::endpoint);
    CHECK(h->t == doctest::Approx(2.0));
}

TEST_CASE("ray/segment hits agree with a long-double oracle") {
    std::mt19937_64 g(5);
    int hits = 0;
    for (int i = 0; i < 20000; ++i) {
        const Point o(uniform(g, -2.0, 2.0), uniform(g, -2.0, 2.0));
        const Direction v = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        const Segment s{Point(uniform(g, -2.0, 2.0), uniform(g, -2.0, 2.0)),
                        Point(uniform(g, -2.0, 2.0), uniform(g, -2.0, 2.0))};
        const auto sol = solve(o, v.vec(), s);
        const auto h = ray_segment_hit(o, v, s);
        if (!sol) continue;
        const auto [t, u] = *sol;
        const double len = s.length();
        // Skip cases within a safety margin of the tolerance boundaries.
        if (std::fabs(t) < 1e-6L || std::fabs(u) * len < 1e-6L || std::fabs(1.0L - u) * len < 1e-6L) continue;
        const bool expected = t > 0 && u > 0 && u < 1;
        REQUIRE(static_cast<bool>(h) == expected);
        if (h) {
            ++hits;
            CHECK(std::abs(h->t - static_cast<double>(t)) <= 1e-9);
            CHECK(h->kind == HitKind::interior);
        }
    }
    CHECK(hits > 1000);
}
