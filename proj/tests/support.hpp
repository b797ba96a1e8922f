#pragma once
/**
 * @file support.hpp
 * @brief Random scene generators and brute-force oracles shared by the tests.
 */

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "specular/geometry.hpp"
#include "specular/interval_set.hpp"
#include "specular/mirror.hpp"
#include "specular/scene.hpp"

namespace specular::testing {

inline double uniform(std::mt19937_64& g, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(g);
}

/// Random raw interval list inside [lo, hi].
inline std::vector<Interval> random_intervals(std::mt19937_64& g, int count, double lo, double hi) {
    std::vector<Interval> out;
    for (int i = 0; i < count; ++i) {
        const double a = uniform(g, lo, hi);
        const double len = uniform(g, 0.0, (hi - lo) * 0.2);
        out.push_back({a, std::min(hi, a + len)});
    }
    return out;
}

/// Measure of a union of intervals by counting covered cells of width step (cell midpoints).
inline double raster_measure(const std::vector<Interval>& raw, double lo, double hi, double step) {
    const auto cells = static_cast<std::size_t>(std::llround((hi - lo) / step));
    std::vector<char> covered(cells, 0);
    for (const auto& iv : raw) {
        const double a = std::min(iv.lo, iv.hi), b = std::max(iv.lo, iv.hi);
        const auto first = static_cast<long long>(std::ceil((a - lo) / step - 0.5));
        const auto last = static_cast<long long>(std::floor((b - lo) / step - 0.5));
        for (long long c = std::max(0LL, first); c <= last && c < static_cast<long long>(cells); ++c) {
            covered[static_cast<std::size_t>(c)] = 1;
        }
    }
    return step * static_cast<double>(std::count(covered.begin(), covered.end(), 1));
}

/// Number of maximal runs of covered cells in the same rasterization.
inline int raster_components(const std::vector<Interval>& raw, double lo, double hi, double step) {
    int runs = 0;
    bool prev = false;
    for (double x = lo + step / 2.0; x < hi; x += step) {
        const bool cur = std::any_of(raw.begin(), raw.end(), [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
        if (cur && !prev) ++runs;
        prev = cur;
    }
    return runs;
}

/// Membership test for a raw union, used as a pointwise oracle.
inline bool raw_contains(const std::vector<Interval>& raw, double x) {
    return std::any_of(raw.begin(), raw.end(), [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

/// Random slope -1 segments with centres in [-extent, extent]^2.
inline Scene random_slope_minus_one(std::mt19937_64& g, int count, double extent, double max_len) {
    Scene s;
    for (int i = 0; i < count; ++i) {
        const Point c(uniform(g, -extent, extent), uniform(g, -extent, extent));
        const double h = uniform(g, 0.05, max_len) / std::sqrt(2.0) / 2.0;
        s.segments.push_back(Segment{c + Point(-h, h), c + Point(h, -h)});
    }
    return s;
}

/// Random segments with arbitrary orientation.
inline Scene random_segments(std::mt19937_64& g, int count, double extent, double max_len) {
    Scene s;
    for (int i = 0; i < count; ++i) {
        const Point c(uniform(g, -extent, extent), uniform(g, -extent, extent));
        const Point d = unit(uniform(g, 0.0, kTwoPi)) * (uniform(g, 0.05, max_len) / 2.0);
        s.segments.push_back(Segment{c - d, c + d});
    }
    return s;
}

/// M_{n,s,k}(A) = A/n + offset_k, with the offset written out independently.
inline Quad map_quad(const Quad& q, int n, const Permutation& s, int k, double theta) {
    const double sn = std::sin(theta);
    const Point off((-(k - 1) + (s[static_cast<std::size_t>(k - 1)] - 1) * std::cos(theta)) / (n * sn),
                    (s[static_cast<std::size_t>(k - 1)] - 1) * std::sin(theta) / (n * sn));
    Quad out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = q[i] / n + off;
    return out;
}

inline std::vector<Quad> oracle_map(const Permutation& s, const std::vector<Quad>& quads, double theta) {
    std::vector<Quad> out;
    const int n = static_cast<int>(s.size());
    for (int k = 1; k <= n; ++k) {
        for (const auto& q : quads) out.push_back(map_quad(q, n, s, k, theta));
    }
    return out;
}

inline bool same_vertex_sets(const std::vector<Quad>& a, const std::vector<Quad>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<char> used(b.size(), 0);
    for (const auto& qa : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size() && !found; ++j) {
            if (used[j]) continue;
            bool eq = true;
            for (std::size_t v = 0; v < 4; ++v) eq = eq && (qa[v] - b[j][v]).norm() <= tol;
            if (eq) used[j] = 1, found = true;
        }
        if (!found) return false;
    }
    return true;
}

inline std::vector<Permutation> all_permutations(int n) {
    Permutation p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i + 1;
    std::vector<Permutation> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Chains with minimal roots, extended forward, written out independently of the library.
inline Permutation oracle_chain(int n, int k1, int k2) {
    Permutation s(static_cast<std::size_t>(n), 0);
    std::set<int> free_dom, free_ran;
    for (int i = 1; i <= n; ++i) free_dom.insert(i), free_ran.insert(i);
    while (!free_dom.empty()) {
        int a = *free_dom.begin(), b = *free_ran.begin();
        while (a <= n && b <= n) {
            s[static_cast<std::size_t>(a - 1)] = b;
            free_dom.erase(a);
            free_ran.erase(b);
            a += k1;
            b += k2;
        }
    }
    return s;
}

}  // namespace specular::testing
