/**
 * @file mirror.cpp
 * @brief Subdivision maps, chain permutations and the invisible mirror pipeline.
 */
#include "specular/mirror.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specular/error.hpp"
#include "specular/parallel.hpp"
#include "specular/projection.hpp"
#include "specular/tracer.hpp"

namespace specular {

namespace {

void check_theta(double theta) {
    require(theta > 0.0 && theta < kPi, "invisible mirror: theta must lie in (0, pi)");
}

/// Distance from alpha - pi/2 to the excluded directions {0, theta} modulo pi.
double excluded_distance(double alpha, double theta) {
    const double a = alpha - kPi / 2.0;
    return std::min(std::abs(std::sin(a)), std::abs(std::sin(a - theta)));
}

}  // namespace

double Rhombus::longer_diagonal() const {
    return std::max((vertices[0] - vertices[2]).norm(), (vertices[1] - vertices[3]).norm());
}

Rhombus rhombus(double theta) {
    check_theta(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    return Rhombus{theta, {Point(0.0, 0.0), Point(c / s, 1.0), Point((c - 1.0) / s, 1.0), Point(-1.0 / s, 0.0)}};
}

Segment diagonal_L(double theta) {
    check_theta(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    return Segment{Point(-1.0 / s, 0.0), Point(c / s, 1.0)};
}

bool is_permutation(const Permutation& s) {
    const int n = static_cast<int>(s.size());
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int v : s) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

Point map_offset(int n, const Permutation& s, int k, double theta) {
    const double sn = std::sin(theta);
    const double dn = static_cast<double>(n);
    return Point(-(k - 1) / dn / sn, 0.0) + unit(theta) * ((s[static_cast<std::size_t>(k - 1)] - 1) / dn / sn);
}

std::vector<Segment> apply_map(const Permutation& s, const std::vector<Segment>& segments, double theta) {
    require(is_permutation(s), "apply_map: s must be a permutation");
    const int n = static_cast<int>(s.size());
    std::vector<Segment> out;
    out.reserve(segments.size() * s.size());
    for (int k = 1; k <= n; ++k) {
        const Point off = map_offset(n, s, k, theta);
        for (const auto& seg : segments) out.push_back(Segment{seg.p / n + off, seg.q / n + off});
    }
    return out;
}

std::vector<Quad> apply_map(const Permutation& s, const std::vector<Quad>& quads, double theta) {
    require(is_permutation(s), "apply_map: s must be a permutation");
    const int n = static_cast<int>(s.size());
    std::vector<Quad> out;
    out.reserve(quads.size() * s.size());
    for (int k = 1; k <= n; ++k) {
        const Point off = map_offset(n, s, k, theta);
        for (const auto& q : quads) {
            Quad m;
            for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(i)] / n + off;
            out.push_back(m);
        }
    }
    return out;
}

std::vector<Quad> apply_map_rhombus(const Permutation& s, double theta) {
    return apply_map(s, std::vector<Quad>{rhombus(theta).vertices}, theta);
}

Interval project_quad(const Quad& q, double alpha) {
    const Point u = unit(alpha);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : q) {
        lo = std::min(lo, p.dot(u));
        hi = std::max(hi, p.dot(u));
    }
    return {lo, hi};
}

double shadow_of_quads(const std::vector<Quad>& quads, double alpha) {
    std::vector<Interval> ivs(quads.size());
    for (std::size_t i = 0; i < quads.size(); ++i) ivs[i] = project_quad(quads[i], alpha);
    return union_measure(ivs);
}

double shadow_Z(const Permutation& s, double theta, double alpha) {
    return shadow_of_quads(apply_map_rhombus(s, theta), alpha);
}

bool on_lattice(Point x, int n, double theta, double tol) {
    // x = (a + b e^{i theta}) / (n sin theta): solve for a, b.
    const double sn = std::sin(theta);
    const double b = x.y * n;
    const double a = x.x * n * sn - b * std::cos(theta);
    return std::abs(a - std::round(a)) <= tol * n && std::abs(b - std::round(b)) <= tol * n;
}

namespace {

ChainPermutation chains_positive(int n1, int k1, int k2) {
    ChainPermutation c;
    c.n = n1;
    c.k1 = k1;
    c.k2 = k2;
    c.s.assign(static_cast<std::size_t>(n1), 0);
    std::vector<char> used(static_cast<std::size_t>(n1) + 1, 0);
    int r1 = 1, r2 = 1;
    int assigned = 0;
    while (assigned < n1) {
        while (r1 <= n1 && c.s[static_cast<std::size_t>(r1 - 1)] != 0) ++r1;
        while (r2 <= n1 && used[static_cast<std::size_t>(r2)]) ++r2;
        std::vector<std::pair<int, int>> chain;
        for (int j1 = r1, j2 = r2; j1 <= n1 && j2 <= n1; j1 += k1, j2 += k2) {
            if (c.s[static_cast<std::size_t>(j1 - 1)] != 0 || used[static_cast<std::size_t>(j2)]) {
                throw Error(ErrorCode::precondition, "chain_permutation: chains failed to be orthogonal");
            }
            c.s[static_cast<std::size_t>(j1 - 1)] = j2;
            used[static_cast<std::size_t>(j2)] = 1;
            chain.emplace_back(j1, j2);
            ++assigned;
        }
        c.chains.push_back(std::move(chain));
    }
    return c;
}

}  // namespace

ChainPermutation chain_permutation(int n1, int k1, int k2, bool allow_small) {
    require(k1 > 0 && k2 != 0, "chain_permutation: need k1 > 0 and k2 != 0");
    require(n1 >= 1, "chain_permutation: need n1 >= 1");
    require(allow_small || n1 > 2 * k1 * std::abs(k2), "chain_permutation: need n1 > 2 k1 |k2|");
    if (k2 > 0) return chains_positive(n1, k1, k2);
    ChainPermutation c = chains_positive(n1, k1, -k2);
    c.k2 = k2;
    c.range_mirrored = true;
    for (auto& v : c.s) v = n1 + 1 - v;
    for (auto& chain : c.chains) {
        for (auto& pr : chain) pr.second = n1 + 1 - pr.second;
    }
    return c;
}

ChainCheck check_chains(const ChainPermutation& c) {
    ChainCheck r;
    const int n = c.n;
    r.bijective = static_cast<int>(c.s.size()) == n && is_permutation(c.s);

    std::vector<int> dom(static_cast<std::size_t>(n) + 1, 0), ran(static_cast<std::size_t>(n) + 1, 0);
    bool orth = true;
    for (std::size_t ci = 0; ci < c.chains.size(); ++ci) {
        for (const auto& [j1, j2] : c.chains[ci]) {
            if (j1 < 1 || j1 > n || j2 < 1 || j2 > n) {
                orth = false;
                continue;
            }
            if (dom[static_cast<std::size_t>(j1)]++ || ran[static_cast<std::size_t>(j2)]++) orth = false;
        }
    }
    r.orthogonal = orth;

    bool maximal = true;
    for (const auto& chain : c.chains) {
        if (chain.empty()) {
            maximal = false;
            continue;
        }
        for (std::size_t i = 1; i < chain.size(); ++i) {
            if (chain[i].first - chain[i - 1].first != c.k1 || chain[i].second - chain[i - 1].second != c.k2) {
                maximal = false;
            }
        }
        const auto [j1, j2] = chain.back();
        const int nj1 = j1 + c.k1, nj2 = j2 + c.k2;
        if (nj1 >= 1 && nj1 <= n && nj2 >= 1 && nj2 <= n) maximal = false;
    }
    r.maximal = maximal;

    bool law = r.bijective;
    for (int j = 1; law && j + c.k1 <= n; ++j) {
        const int target = c.s[static_cast<std::size_t>(j - 1)] + c.k2;
        if (target >= 1 && target <= n && c.s[static_cast<std::size_t>(j + c.k1 - 1)] != target) law = false;
    }
    r.forward_law = law;
    return r;
}

Permutation compose(const Permutation& s1, const Permutation& s2) {
    require(is_permutation(s1) && is_permutation(s2), "compose: arguments must be permutations");
    const int n1 = static_cast<int>(s1.size()), n2 = static_cast<int>(s2.size());
    Permutation s3(static_cast<std::size_t>(n1) * n2);
    for (int k = 1; k <= n1; ++k) {
        for (int kk = 1; kk <= n2; ++kk) {
            s3[static_cast<std::size_t>(n2 * (k - 1) + kk - 1)] =
                n2 * (s1[static_cast<std::size_t>(k - 1)] - 1) + s2[static_cast<std::size_t>(kk - 1)];
        }
    }
    return s3;
}

std::optional<std::pair<int, int>> lattice_hit(double alpha, double theta, int k_max) {
    check_theta(theta);
    require(k_max >= 1, "lattice_hit: k_max must be at least 1");
    require(excluded_distance(alpha, theta) > 1e-12, "lattice_hit: alpha - pi/2 must avoid 0 and theta");
    const Point nrm = unit(alpha);
    const Point e = unit(theta);
    const double sn = std::sin(theta);
    for (int m = 1; m <= k_max; ++m) {
        // Shell max(|k1|, |k2|) = m, by increasing |k1| + |k2|, then k1, then k2.
        std::vector<std::pair<int, int>> shell;
        for (int k1 = 1; k1 <= m; ++k1) {
            for (int k2 = -m; k2 <= m; ++k2) {
                if (k2 == 0 || std::max(k1, std::abs(k2)) != m) continue;
                shell.emplace_back(k1, k2);
            }
        }
        std::stable_sort(shell.begin(), shell.end(), [](auto a, auto b) {
            return a.first + std::abs(a.second) < b.first + std::abs(b.second);
        });
        for (const auto& [k1, k2] : shell) {
            const Point z = (Point(-k1, 0.0) + e * k2) / sn;
            if (std::abs(z.dot(nrm)) <= 1e-9) return std::make_pair(k1, k2);
        }
    }
    return std::nullopt;
}

LatticeApprox nearest_lattice_approx(double alpha, double theta, int n, double delta) {
    check_theta(theta);
    require(n >= 1, "nearest_lattice_approx: n must be positive");
    require(delta > 0.0, "nearest_lattice_approx: delta must be positive");
    require(excluded_distance(alpha, theta) > 1e-12, "nearest_lattice_approx: alpha - pi/2 must avoid 0 and theta");
    const Point nrm = unit(alpha);
    const Point e = unit(theta);
    const double scale = 1.0 / (n * std::sin(theta));
    // On the line: (-k1 + k2 cos) cos(alpha) + k2 sin(theta) sin(alpha) = 0.
    const double ratio = std::cos(alpha) / std::cos(alpha - theta);

    auto make = [&](int k1, int k2) {
        LatticeApprox a;
        a.k1 = k1;
        a.k2 = k2;
        a.z = (Point(-k1, 0.0) + e * k2) * scale;
        a.alignment = std::abs(a.z.dot(nrm)) / a.z.norm();
        return a;
    };
    constexpr int kBound = 1000000;
    for (int k1 = 1; k1 <= kBound; ++k1) {
        const double target = ratio * k1;
        std::optional<LatticeApprox> best;
        for (double k2d : {std::floor(target), std::ceil(target)}) {
            if (std::abs(k2d) > kBound || k2d == 0.0) continue;
            const auto cand = make(k1, static_cast<int>(k2d));
            if (cand.alignment <= delta && (!best || cand.z.norm() < best->z.norm())) best = cand;
        }
        if (best) return *best;
    }
    throw Error(ErrorCode::budget_exhausted, "nearest_lattice_approx: no lattice point within the coefficient bound");
}

namespace {

/// True when every chain rooted in D1 = {j, k <= n1 (1 - eps/(16 l))} has at least n2 elements.
bool d1_chains_long(int n1, int k1, int k2abs, int n2, double eps, double ell) {
    const ChainPermutation c = chains_positive(n1, k1, k2abs);
    const double bound = n1 * (1.0 - eps / (16.0 * ell));
    for (const auto& chain : c.chains) {
        const auto [r1, r2] = chain.front();
        if (r1 <= bound && r2 <= bound && static_cast<int>(chain.size()) < n2) return false;
    }
    return true;
}

int design_n1(int k1, int k2abs, int n2, double eps, double ell) {
    const int kmax = std::max(k1, k2abs);
    int lo = std::max(2 * k1 * k2abs + 1, (n2 - 1) * kmax);
    if (d1_chains_long(lo, k1, k2abs, n2, eps, ell)) return lo;
    int hi = lo;
    while (!d1_chains_long(hi, k1, k2abs, n2, eps, ell)) {
        lo = hi;
        if (hi > (1 << 26)) throw Error(ErrorCode::budget_exhausted, "design_n1: n1 too large");
        hi *= 2;
    }
    // Bisection for the threshold between lo (fails) and hi (passes).
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (d1_chains_long(mid, k1, k2abs, n2, eps, ell)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

MirrorStage build_stage(double alpha, double theta, double eps, int n1_cap, double delta) {
    check_theta(theta);
    require(eps > 0.0, "build_stage: eps must be positive");
    MirrorStage st;
    st.alpha = alpha;
    if (auto hit = lattice_hit(alpha, theta, 64)) {
        st.k1 = hit->first;
        st.k2 = hit->second;
        st.rational = true;
        st.alignment = 0.0;
    } else {
        const auto approx = nearest_lattice_approx(alpha, theta, 1, delta);
        st.k1 = approx.k1;
        st.k2 = approx.k2;
        st.alignment = approx.alignment;
    }
    const double ell = rhombus(theta).longer_diagonal();
    st.n2 = static_cast<int>(std::ceil(8.0 * ell / eps));
    st.n1_designed = design_n1(st.k1, std::abs(st.k2), st.n2, eps, ell);
    int n1 = st.n1_designed;
    const int n1_min = 2 * st.k1 * std::abs(st.k2) + 1;
    if (n1_cap > 0 && n1 > n1_cap) {
        n1 = std::max(n1_cap, n1_min);
        st.undersized = true;
    }
    st.chain = chain_permutation(n1, st.k1, st.k2);
    const auto quads = apply_map_rhombus(st.chain.s, theta);
    st.shadow = shadow_of_quads(quads, alpha);
    st.meets_half_eps = st.shadow < eps / 2.0;

    // Coverage: widen around alpha while the shadow stays below eps.
    constexpr double kStep = 1e-3;
    auto extend = [&](double dir) {
        double a = alpha;
        while (true) {
            const double next = a + dir * kStep;
            if (excluded_distance(next, theta) < 1e-6 || std::abs(next - alpha) > kPi) break;
            if (!(shadow_of_quads(quads, next) < eps)) break;
            a = next;
        }
        return a;
    };
    if (st.shadow < eps) {
        st.cover_lo = extend(-1.0);
        st.cover_hi = extend(1.0);
    } else {
        st.cover_lo = st.cover_hi = alpha;
    }
    return st;
}

std::vector<double> compact_alpha_range(double theta, double eps, int samples) {
    check_theta(theta);
    std::vector<std::pair<double, double>> pieces;
    if (theta - eps >= eps) pieces.emplace_back(eps, theta - eps);
    if (kPi - eps >= theta + eps) pieces.emplace_back(theta + eps, kPi - eps);
    double total = 0.0;
    for (const auto& [a, b] : pieces) total += b - a;
    std::vector<double> out;
    for (const auto& [a, b] : pieces) {
        const int m = std::max(1, static_cast<int>(std::lround(samples * (b - a) / std::max(total, 1e-300))));
        for (int i = 0; i < m; ++i) {
            const double x = m == 1 ? 0.5 * (a + b) : a + (b - a) * i / (m - 1);
            out.push_back(x + kPi / 2.0);
        }
    }
    return out;
}

InvisibleMirror build_invisible_mirror(double theta, double eps, const AlphaSpec& alphas, std::size_t budget,
                                       int threads) {
    check_theta(theta);
    require(eps > 0.0, "build_invisible_mirror: eps must be positive");
    require(budget >= 1, "build_invisible_mirror: budget must be positive");
    const std::vector<double> targets =
        alphas.explicit_alphas.empty() ? compact_alpha_range(theta, eps, alphas.range_samples) : alphas.explicit_alphas;
    const int cap = static_cast<int>(std::min<std::size_t>(budget, 1u << 30));

    InvisibleMirror out;
    MirrorReport& rep = out.report;
    rep.theta = theta;
    rep.eps = eps;
    rep.budget = budget;

    // Greedy cover: a new stage at each target not yet covered by earlier stages.
    for (double a : targets) {
        bool covered = false;
        for (const auto& st : rep.stages) covered = covered || (a >= st.cover_lo && a <= st.cover_hi && st.shadow < eps);
        if (covered) continue;
        rep.stages.push_back(build_stage(a, theta, eps, cap));
    }

    // Compose the widest stages first while the product stays within budget.
    std::vector<std::size_t> order(rep.stages.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return rep.stages[i].cover_hi - rep.stages[i].cover_lo > rep.stages[j].cover_hi - rep.stages[j].cover_lo;
    });
    Permutation s_star{1};
    std::size_t n_star = 1;
    for (std::size_t i : order) {
        const std::size_t n1 = rep.stages[i].chain.s.size();
        if (n_star * n1 > budget) {
            rep.budget_exhausted = true;
            continue;
        }
        s_star = compose(s_star, rep.stages[i].chain.s);
        n_star *= n1;
        rep.composed.push_back(i);
    }
    rep.n_star = static_cast<int>(n_star);
    out.s_star = s_star;
    out.g.segments = apply_map(s_star, {diagonal_L(theta)}, theta);

    const MirrorReport check = verify_mirror(out.g, theta, eps, 1000, targets, threads);
    rep.alpha_grid = check.alpha_grid;
    rep.shadows = check.shadows;
    rep.part_one = check.part_one;
    rep.covered.assign(rep.alpha_grid.size(), 0);
    for (std::size_t g = 0; g < rep.alpha_grid.size(); ++g) {
        for (std::size_t i : rep.composed) {
            const auto& st = rep.stages[i];
            if (rep.alpha_grid[g] >= st.cover_lo && rep.alpha_grid[g] <= st.cover_hi) rep.covered[g] = 1;
        }
    }
    return out;
}

MirrorReport verify_mirror(const Scene& g, double theta, double eps, std::size_t n_rays,
                           const std::vector<double>& alpha_grid, int threads) {
    check_theta(theta);
    MirrorReport rep;
    rep.theta = theta;
    rep.eps = eps;
    rep.alpha_grid = alpha_grid;
    rep.shadows.resize(alpha_grid.size());
    const std::span<const Segment> segs(g.segments);
    parallel_for(alpha_grid.size(), [&](std::size_t i) { rep.shadows[i] = shadow_measure(segs, alpha_grid[i]); },
                 threads);

    const SceneIndex index(g);
    const double x_start = (g.empty() ? 0.0 : g.bounds().lo.x) - 1.0;
    const Point exit_axis = unit(theta + kPi / 2.0);
    std::vector<RayPath> paths(n_rays);
    parallel_for(n_rays, [&](std::size_t i) {
        const double r = (static_cast<double>(i) + 0.5) / static_cast<double>(n_rays);
        paths[i] = trace_from(index, Point(x_start, r), Direction::from_angle(0.0));
    }, threads);

    MirrorPartOne& p1 = rep.part_one;
    p1.n_rays = n_rays;
    p1.bounce_histogram.assign(4, 0);
    p1.min_offset = std::numeric_limits<double>::infinity();
    p1.max_offset = -std::numeric_limits<double>::infinity();
    for (const auto& path : paths) {
        if (path.degenerate()) {
            ++p1.degenerate;
            continue;
        }
        ++p1.bounce_histogram[static_cast<std::size_t>(std::min(path.bounces, 3))];
        const double diff = wrap_angle(path.exit.v.angle() - theta);
        const double err = std::min(diff, kTwoPi - diff);
        const double offset = path.exit.w.dot(exit_axis);
        const bool ok = path.status == TraceStatus::ok && path.bounces == 1 && err <= 1e-9 &&
                        offset >= -kEpsGeom && offset <= 1.0 + kEpsGeom;
        if (path.bounces == 1) ++p1.one_bounce;
        if (!ok) ++p1.failures;
        p1.max_angle_error = std::max(p1.max_angle_error, err);
        p1.min_offset = std::min(p1.min_offset, offset);
        p1.max_offset = std::max(p1.max_offset, offset);
    }
    if (p1.min_offset > p1.max_offset) p1.min_offset = p1.max_offset = 0.0;
    return rep;
}

}  // namespace specular
