/**
 * @file test_mirror.cpp
 * @brief Rhombus maps, chain permutations, composition and the invisible mirror.
 */
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "specular/error.hpp"
#include "specular/mirror.hpp"
#include "specular/projection.hpp"
#include "specular/tracer.hpp"
#include "support.hpp"

using namespace specular;
using namespace specular::testing;


TEST_CASE("rhombus at theta = pi/2 is the unit square") {
    const Rhombus z = rhombus(kPi / 2.0);
    CHECK((z.vertices[0] - Point(0.0, 0.0)).norm() <= 1e-15);
    CHECK((z.vertices[1] - Point(0.0, 1.0)).norm() <= 1e-15);
    CHECK((z.vertices[2] - Point(-1.0, 1.0)).norm() <= 1e-15);
    CHECK((z.vertices[3] - Point(-1.0, 0.0)).norm() <= 1e-15);
    CHECK(z.side() == doctest::Approx(1.0));
    CHECK(z.longer_diagonal() == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(rhombus(0.0), Error);
    CHECK_THROWS_AS(rhombus(kPi), Error);
}

TEST_CASE("rhombus at theta = pi/4 and its diagonal L") {
    const double theta = kPi / 4.0;
    const Rhombus z = rhombus(theta);
    const double side = std::sqrt(2.0);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK((z.vertices[(i + 1) % 4] - z.vertices[i]).norm() == doctest::Approx(side));
    }
    CHECK((z.vertices[1] - Point(1.0, 1.0)).norm() <= 1e-12);
    CHECK((z.vertices[3] - Point(-side, 0.0)).norm() <= 1e-12);
    const Segment l = diagonal_L(theta);
    CHECK((l.p - z.vertices[3]).norm() <= 1e-12);
    CHECK((l.q - z.vertices[1]).norm() <= 1e-12);
    CHECK(Direction::from_vector(l.direction_vector()).angle() == doctest::Approx(kPi / 8.0));
    CHECK(l.length() == doctest::Approx(z.longer_diagonal()));
    // L avoids the origin: the origin is not within kEpsGeom of the segment.
    const Point d = l.direction_vector() / l.length();
    CHECK(std::abs((Point(0.0, 0.0) - l.p).cross(d)) > 0.1);
}

TEST_CASE("the identity permutation tiles Z along K_0") {
    const double theta = 1.0;
    const Permutation id{1};
    CHECK((map_offset(1, id, 1, theta)).norm() == 0.0);
    const auto one = apply_map_rhombus(id, theta);
    REQUIRE(one.size() == 1);
    for (std::size_t v = 0; v < 4; ++v) CHECK((one[0][v] - rhombus(theta).vertices[v]).norm() <= 1e-15);
}

TEST_CASE("the copies of a subdivision have vertices on the lattice") {
    const double theta = 1.1;
    const Permutation s{3, 1, 2, 4};
    const auto quads = apply_map_rhombus(s, theta);
    REQUIRE(quads.size() == 4);
    for (const auto& q : quads) {
        for (const auto& v : q) CHECK(on_lattice(v, 4, theta));
    }
    CHECK_FALSE(on_lattice(Point(0.123, 0.456), 4, theta));
    // Each copy is Z scaled by 1/n.
    double area = 0.0;
    for (const auto& q : quads) {
        for (std::size_t i = 0; i < 4; ++i) area += q[i].cross(q[(i + 1) % 4]) / 2.0;
    }
    CHECK(area == doctest::Approx(1.0 / std::sin(theta) / 4.0));
    // Mapped vertices agree with the independent formula.
    CHECK(same_vertex_sets(quads, oracle_map(s, {rhombus(theta).vertices}, theta), 1e-12));
}

TEST_CASE("apply_map on segments orders copies by k") {
    const double theta = 0.9;
    const Permutation s{2, 1};
    const std::vector<Segment> base{diagonal_L(theta), Segment{Point(0.0, 0.0), Point(0.0, 1.0)}};
    const auto out = apply_map(s, base, theta);
    REQUIRE(out.size() == 4);
    for (int k = 1; k <= 2; ++k) {
        for (std::size_t i = 0; i < 2; ++i) {
            const Segment& got = out[static_cast<std::size_t>(k - 1) * 2 + i];
            const Point off = map_offset(2, s, k, theta);
            CHECK((got.p - (base[i].p / 2.0 + off)).norm() <= 1e-15);
            CHECK((got.q - (base[i].q / 2.0 + off)).norm() <= 1e-15);
        }
    }
}

TEST_CASE("permutations are recognized") {
    CHECK(is_permutation({1}));
    CHECK(is_permutation({2, 3, 1}));
    CHECK_FALSE(is_permutation({1, 1}));
    CHECK_FALSE(is_permutation({0, 1}));
    CHECK_FALSE(is_permutation({1, 3}));
}

TEST_CASE("lattice_hit examples") {
    const auto h = lattice_hit(kPi / 2.0 + 3.0 * kPi / 4.0, kPi / 2.0, 5);
    REQUIRE(h);
    CHECK(h->first == 1);
    CHECK(h->second == 1);
    const auto h2 = lattice_hit(kPi / 2.0 + kPi / 4.0, kPi / 2.0, 5);
    REQUIRE(h2);
    CHECK(*h2 == std::make_pair(1, -1));
    CHECK_FALSE(lattice_hit(kPi / 2.0 + 1.0, kPi / 2.0, 20));
    CHECK_THROWS_AS(lattice_hit(kPi / 2.0, kPi / 2.0, 5), Error);
    CHECK_THROWS_AS(lattice_hit(kPi, kPi / 2.0, 5), Error);
}

TEST_CASE("lattice steps found by lattice_hit are orthogonal to e^{i alpha}") {
    for (double theta : {kPi / 3.0, kPi / 4.0, 2.0}) {
        for (int k1 = 1; k1 <= 3; ++k1) {
            for (int k2 : {-3, -2, -1, 1, 2, 3}) {
                const Point z = (Point(-k1, 0.0) + unit(theta) * k2) / std::sin(theta);
                const double a = std::fmod(Direction::from_vector(z).angle(), kPi) + kPi / 2.0;
                const auto h = lattice_hit(a, theta, 4);
                REQUIRE(h);
                const Point zz = (Point(-h->first, 0.0) + unit(theta) * h->second) / std::sin(theta);
                CHECK(std::abs(zz.dot(unit(a))) <= 1e-9);
                CHECK(std::gcd(h->first, std::abs(h->second)) == 1);
            }
        }
    }
}

TEST_CASE("golden-ratio directions are approximated by Fibonacci pairs") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double alpha = kPi / 2.0 + kPi - std::atan(phi);
    const std::vector<int> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597, 2584};
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const LatticeApprox a = nearest_lattice_approx(alpha, kPi / 2.0, 1, delta);
        CHECK(a.alignment <= delta);
        const auto it = std::find(fib.begin() + 1, fib.end(), a.k1);
        REQUIRE(it != fib.end());
        CHECK(a.k2 == *(it + 1));
    }
    const LatticeApprox coarse = nearest_lattice_approx(alpha, kPi / 2.0, 1, 1e-2);
    const LatticeApprox fine = nearest_lattice_approx(alpha, kPi / 2.0, 1, 1e-4);
    CHECK(fine.k1 >= coarse.k1);
}

TEST_CASE("rational directions are found exactly by the approximation") {
    const double alpha = kPi / 2.0 + 3.0 * kPi / 4.0;
    const LatticeApprox a = nearest_lattice_approx(alpha, kPi / 2.0, 3, 1e-6);
    CHECK(a.k1 == 1);
    CHECK(a.k2 == 1);
    CHECK(a.alignment <= 1e-12);
    CHECK((a.z - Point(-1.0, 1.0) / 3.0).norm() <= 1e-12);
}

TEST_CASE("chain permutation examples") {
    const auto id = chain_permutation(4, 1, 1, true);
    CHECK(id.s == Permutation{1, 2, 3, 4});
    CHECK(id.chains.size() == 1);
    const auto hand = chain_permutation(4, 1, 2, true);
    CHECK(hand.s == Permutation{1, 3, 2, 4});
    CHECK(check_chains(hand).ok());
    CHECK_THROWS_AS(chain_permutation(4, 1, 2), Error);
    CHECK_THROWS_AS(chain_permutation(10, 0, 1), Error);
    CHECK_THROWS_AS(chain_permutation(10, 1, 0), Error);
    const auto mirrored = chain_permutation(9, 1, -2);
    CHECK(mirrored.range_mirrored);
    CHECK(check_chains(mirrored).ok());
}

TEST_CASE("chain invariants hold exhaustively and match the oracle") {
    for (int n = 1; n <= 30; ++n) {
        for (int k1 = 1; k1 <= 4; ++k1) {
            for (int k2 = 1; k2 <= 4; ++k2) {
                if (n <= 2 * k1 * k2) continue;
                for (int sign : {1, -1}) {
                    const auto c = chain_permutation(n, k1, sign * k2);
                    REQUIRE(check_chains(c).ok());
                    Permutation expected = oracle_chain(n, k1, k2);
                    if (sign < 0) {
                        for (auto& v : expected) v = n + 1 - v;
                    }
                    CHECK(c.s == expected);
                    // Forward-step law checked directly.
                    for (int j = 1; j + k1 <= n; ++j) {
                        const int t = c.s[static_cast<std::size_t>(j - 1)] + sign * k2;
                        if (t >= 1 && t <= n) CHECK(c.s[static_cast<std::size_t>(j + k1 - 1)] == t);
                    }
                }
            }
        }
    }
}

TEST_CASE("same-chain copies of Z cast identical shadows") {
    const double theta = kPi / 4.0;
    const double alpha = 9.0 * kPi / 8.0;
    const auto hit = lattice_hit(alpha, theta, 8);
    REQUIRE(hit);
    const auto c = chain_permutation(42, hit->first, hit->second);
    const auto quads = apply_map_rhombus(c.s, theta);
    for (const auto& chain : c.chains) {
        const Interval first = project_quad(quads[static_cast<std::size_t>(chain.front().first - 1)], alpha);
        for (const auto& [j1, j2] : chain) {
            const Interval iv = project_quad(quads[static_cast<std::size_t>(j1 - 1)], alpha);
            CHECK(std::abs(iv.lo - first.lo) <= 1e-9);
            CHECK(std::abs(iv.hi - first.hi) <= 1e-9);
        }
    }
}

TEST_CASE("each copy casts at most l / n") {
    const double theta = 1.2;
    const Permutation s{5, 2, 4, 1, 3};
    const double l = rhombus(theta).longer_diagonal();
    const auto quads = apply_map_rhombus(s, theta);
    for (double alpha = 0.0; alpha < kPi; alpha += 0.05) {
        for (const auto& q : quads) CHECK(project_quad(q, alpha).length() <= l / 5.0 + 1e-12);
        CHECK(shadow_Z(s, theta, alpha) == doctest::Approx(shadow_of_quads(quads, alpha)));
    }
}

TEST_CASE("composition matches nested subdivision for all small pairs") {
    const double theta = 1.0;
    const Quad z = rhombus(theta).vertices;
    for (int n1 = 1; n1 <= 3; ++n1) {
        for (int n2 = 1; n2 <= 3; ++n2) {
            for (const auto& s1 : all_permutations(n1)) {
                for (const auto& s2 : all_permutations(n2)) {
                    const Permutation s3 = compose(s1, s2);
                    REQUIRE(is_permutation(s3));
                    const auto nested = oracle_map(s1, oracle_map(s2, {z}, theta), theta);
                    CHECK(same_vertex_sets(nested, apply_map_rhombus(s3, theta), 1e-9));
                    CHECK(same_vertex_sets(apply_map(s1, apply_map_rhombus(s2, theta), theta),
                                           apply_map_rhombus(s3, theta), 1e-9));
                }
            }
        }
    }
    CHECK(compose({1}, {2, 1}) == Permutation{2, 1});
    CHECK(compose({2, 1}, {1, 2}) == Permutation{3, 4, 1, 2});
    CHECK_THROWS_AS(compose({1, 1}, {1}), Error);
}

TEST_CASE("composition keeps a stage's shadow bound") {
    const double theta = kPi / 4.0;
    const double alpha = 9.0 * kPi / 8.0;
    const auto c = chain_permutation(42, 1, 1);
    const double single = shadow_Z(c.s, theta, alpha);
    const double composed = shadow_Z(compose(c.s, Permutation{2, 1, 3}), theta, alpha);
    CHECK(composed <= single + 1e-12);
}

TEST_CASE("a stage at theta = pi/4 meets half eps") {
    const MirrorStage st = build_stage(9.0 * kPi / 8.0, kPi / 4.0, 0.5);
    CHECK(st.rational);
    CHECK(st.k1 == 1);
    CHECK(std::abs(st.k2) == 1);
    CHECK(st.n2 == static_cast<int>(std::ceil(8.0 * rhombus(kPi / 4.0).longer_diagonal() / 0.5)));
    CHECK(st.chain.n >= st.n2);
    CHECK(check_chains(st.chain).ok());
    CHECK(st.meets_half_eps);
    CHECK(st.shadow < 0.25);
    CHECK(st.cover_lo <= st.alpha);
    CHECK(st.cover_hi >= st.alpha);
}

TEST_CASE("the compact alpha range avoids the excluded directions") {
    const double theta = kPi / 4.0, eps = 0.3;
    const auto grid = compact_alpha_range(theta, eps, 40);
    CHECK_FALSE(grid.empty());
    for (double a : grid) {
        const double t = a - kPi / 2.0;
        CHECK(t >= eps - 1e-12);
        CHECK(t <= kPi - eps + 1e-12);
        CHECK(std::abs(t - theta) >= eps - 1e-12);
    }
}

TEST_CASE("a single diagonal is an exact one-bounce mirror") {
    const double theta = kPi / 4.0;
    const Scene g{{diagonal_L(theta)}, {}};
    const MirrorReport r = verify_mirror(g, theta, 0.5, 200, {9.0 * kPi / 8.0});
    CHECK(r.part_one.failures == 0);
    CHECK(r.part_one.one_bounce + r.part_one.degenerate == 200);
    CHECK(r.part_one.max_angle_error <= 1e-9);
    CHECK(r.part_one.min_offset >= -1e-9);
    CHECK(r.part_one.max_offset <= 1.0 + 1e-9);
    REQUIRE(r.shadows.size() == 1);
    CHECK(r.shadows[0] == doctest::Approx(project_segment(g.segments[0], 9.0 * kPi / 8.0).length()));
}

TEST_CASE("invisible mirror for one target direction") {
    const double theta = kPi / 4.0, eps = 0.5;
    const double alpha = 9.0 * kPi / 8.0;
    const InvisibleMirror m = build_invisible_mirror(theta, eps, AlphaSpec{{alpha}, 64}, 64, 1);
    CHECK(m.report.n_star <= 64);
    CHECK(m.g.size() == static_cast<std::size_t>(m.report.n_star));
    CHECK(is_permutation(m.s_star));
    CHECK(shadow_measure(m.g, alpha) < eps / 2.0);
    CHECK(shadow_measure(m.g, alpha) <= shadow_Z(m.s_star, theta, alpha) + 1e-12);
    const MirrorReport r = verify_mirror(m.g, theta, eps, 1000, {alpha});
    CHECK(r.part_one.failures == 0);
    CHECK(r.part_one.degenerate <= static_cast<std::size_t>(m.report.n_star));
    CHECK(r.part_one.max_angle_error <= 1e-9);
    // Every segment is a copy of L.
    const double l = diagonal_L(theta).length() / m.report.n_star;
    for (const auto& s : m.g.segments) CHECK(s.length() == doctest::Approx(l));
}
