/**
 * @file acceptance.cpp
 * @brief Acceptance run: one PASS/FAIL line per criterion with pinned tolerances.
 *
 * Exit status is 0 only when every criterion passes.
 */
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "specular/block.hpp"
#include "specular/error.hpp"
#include "specular/measure.hpp"
#include "specular/mirror.hpp"
#include "specular/projection.hpp"
#include "specular/scene_io.hpp"
#include "specular/tracer.hpp"
#include "specular/urchin.hpp"
#include "support.hpp"

using namespace specular;
using namespace specular::testing;

namespace {

/// Pinned tolerances and budgets.
constexpr double kReflectTol = 1e-12;
constexpr double kRasterStep = 1e-4;
constexpr double kRasterTol = 2e-4;
constexpr std::size_t kBundleRays = 100000;
constexpr double kVertexTol = 1e-9;
constexpr double kAngleTol = 1e-9;
constexpr std::size_t kNu2Samples = 100000;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass{false};
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit_s <= 0.0 || secs < limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++g_failures;
    std::printf("[%s] %2d %-28s %s; %.2f s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(), secs,
                in_time ? "" : " (over time limit)");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome reflection() {
    const Direction r = reflect_direction(Direction::from_angle(0.0), Direction::from_vector(Point(1.0, -1.0)));
    const double ex = (r.vec() - Point(0.0, -1.0)).norm();
    std::mt19937_64 g(kSeed);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const Direction v = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        const Direction m = Direction::from_angle(uniform(g, 0.0, kTwoPi));
        worst = std::max(worst, (reflect_direction(reflect_direction(v, m), m).vec() - v.vec()).norm());
    }
    return {ex <= kReflectTol && worst <= kReflectTol,
            "example err " + fmt("%.1e", ex) + ", involution max err " + fmt("%.1e", worst)};
}

Outcome interval_oracle() {
    std::mt19937_64 g(kSeed + 1);
    double worst = 0.0;
    std::size_t drawn = 0;
    for (int trial = 0; trial < 1000;) {
        const auto raw = random_intervals(g, 1 + trial % 10, 0.0, 1.0);
        ++drawn;
        if (raster_components(raw, 0.0, 1.0, kRasterStep) > 2) continue;
        const double exact = IntervalSet(raw).measure();
        worst = std::max(worst, std::abs(exact - raster_measure(raw, 0.0, 1.0, kRasterStep)));
        ++trial;
    }
    return {worst <= kRasterTol, "1000 unions (of " + std::to_string(drawn) + " drawn, <= 2 components), max |exact - raster| " +
                                     fmt("%.2e", worst)};
}

Outcome conservation() {
    std::mt19937_64 g(kSeed + 2);
    double worst_ratio = 0.0;
    std::size_t degenerate = 0, bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Scene sc = random_slope_minus_one(g, 5 + trial % 40, 1.0, 0.8);
        const double theta = uniform(g, 0.0, kPi);
        const IntervalSet b1{{-2.0, 2.0}};
        const BundleTransportResult r = bundle_transport(sc, theta, b1, kBundleRays);
        degenerate += r.degenerate;
        const double bound = 2.0 * r.b1 / static_cast<double>(kBundleRays);
        worst_ratio = std::max(worst_ratio, r.imbalance() / bound);
        if (r.imbalance() > bound) ++bad;
    }
    return {bad == 0, "100 families, worst |b2+b3-b1| / (2 b1/n) = " + fmt("%.3f", worst_ratio) +
                          ", degenerate rays " + std::to_string(degenerate)};
}

Outcome block_verification() {
    const BlockSpec spec{1.0, 0.30, 0.25, BlockSpec{}.max_levels};
    const BlockSearchResult res = search_block(spec, 1e-3);
    const BlockReport& r = res.report;
    const bool pass = res.accepted && r.bad_range1 <= 0.25 && r.bad_range2 <= 0.25 && r.contained &&
                      r.diameter < 3.0 * std::sqrt(2.0);
    std::string d = "bad1 " + fmt("%.3f", r.bad_range1) + ", bad2 " + fmt("%.3f", r.bad_range2) + " (limit 0.25)" +
                    ", diameter " + fmt("%.3f", r.diameter) + ", contained " + (r.contained ? "yes" : "no") +
                    ", segments " + std::to_string(r.segment_count);
    return {pass, d};
}

Outcome nu2_calibration() {
    const auto samples = sample_lines(kNu2Samples, kSeed + 3);
    const Nu2Estimate all = nu2_estimate(samples, [](const Direction&, Point) { return true; });
    const Nu2Estimate half = nu2_estimate(samples, [](const Direction&, Point w) { return w.norm() <= 0.5; });
    const bool pass = all.measure == kNu2Total && std::abs(half.measure - 2.0 * kPi) <= 3.0 * half.ci;
    return {pass, "nu2(V) " + fmt("%.12f", all.measure) + ", nu2(r<=1/2) " + fmt("%.4f", half.measure) +
                      " vs 2pi, |diff|/CI " + fmt("%.2f", std::abs(half.measure - 2.0 * kPi) / half.ci)};
}

Outcome urchin_ladder() {
    const std::vector<double> ladder{0.9, 0.7, 0.5};
    std::vector<double> good, same;
    std::string d;
    bool blocks_ok = true;
    for (double e1 : ladder) {
        const UrchinParams p = solve_parameters(1.0, UrchinOverrides{20, 0.1, e1});
        const BlockSearchResult blk = search_block(BlockSpec{1.0, p.theta1(), e1, 10}, 1e-3);
        blocks_ok = blocks_ok && blk.accepted;
        const UrchinScene u = build_urchin(p, scaled(blk.scene, p.rho));
        const Theorem1Report r = theorem1_report(u, p, 1.0, 100000, kSeed + 4, 0, kDefaultBounceCap, 20000);
        good.push_back(r.good_fraction);
        same.push_back(r.same_direction_fraction);
        char buf[256];
        std::snprintf(buf, sizeof buf, "%seps1 %.1f: same %.3f good %.3f nu2(miss own spike) %.2f", d.empty() ? "" : "; ",
                      e1, r.same_direction_fraction, r.good_fraction, r.bundles.nu2_miss_own_spike);
        d += buf;
    }
    const bool monotone = std::is_sorted(good.begin(), good.end()) &&
                          std::adjacent_find(good.begin(), good.end()) == good.end();
    const bool same_ok = std::all_of(same.begin(), same.end(), [](double s) { return s >= 0.9; });
    d += std::string("; good monotone ") + (monotone ? "yes" : "no") + ", same >= 0.9 " + (same_ok ? "yes" : "no") +
         ", blocks verified " + (blocks_ok ? "yes" : "no");
    return {monotone && same_ok && blocks_ok, d};
}

Outcome chains() {
    std::size_t cases = 0, bad = 0;
    for (int n = 1; n <= 30; ++n) {
        for (int k1 = 1; k1 <= 4; ++k1) {
            for (int k2 = 1; k2 <= 4; ++k2) {
                if (n <= 2 * k1 * k2) continue;
                ++cases;
                const ChainPermutation c = chain_permutation(n, k1, k2);
                bool ok = check_chains(c).ok() && is_permutation(c.s);
                for (int j = 1; ok && j + k1 <= n; ++j) {
                    const int t = c.s[static_cast<std::size_t>(j - 1)] + k2;
                    if (t <= n && c.s[static_cast<std::size_t>(j + k1 - 1)] != t) ok = false;
                }
                if (!ok) ++bad;
            }
        }
    }
    const Permutation hand = chain_permutation(4, 1, 2, true).s;
    const bool hand_ok = hand == Permutation{1, 3, 2, 4};
    return {bad == 0 && hand_ok, std::to_string(cases) + " cases, " + std::to_string(bad) +
                                     " failing; (4,1,2) -> (" + std::to_string(hand[0]) + "," +
                                     std::to_string(hand[1]) + "," + std::to_string(hand[2]) + "," +
                                     std::to_string(hand[3]) + ")"};
}

Outcome chain_identity() {
    const double theta = kPi / 4.0, eps = 0.5;
    const double alpha = 9.0 * kPi / 8.0;
    const MirrorStage st = build_stage(alpha, theta, eps);
    const auto quads = apply_map_rhombus(st.chain.s, theta);
    double worst = 0.0;
    for (const auto& chain : st.chain.chains) {
        const IntervalSet first{project_quad(quads[static_cast<std::size_t>(chain.front().first - 1)], alpha)};
        for (const auto& [j1, j2] : chain) {
            const IntervalSet iv{project_quad(quads[static_cast<std::size_t>(j1 - 1)], alpha)};
            if (!iv.approx_equal(first, kVertexTol)) worst = std::max(worst, 1.0);
            worst = std::max({worst, std::abs(iv.intervals()[0].lo - first.intervals()[0].lo),
                              std::abs(iv.intervals()[0].hi - first.intervals()[0].hi)});
        }
    }
    const double shadow = shadow_Z(st.chain.s, theta, alpha);
    return {worst <= kVertexTol && shadow < eps / 2.0,
            "n1 " + std::to_string(st.chain.n) + ", step (" + std::to_string(st.k1) + "," + std::to_string(st.k2) +
                "), max chain endpoint diff " + fmt("%.1e", worst) + ", Leb(Pi_alpha Z) " + fmt("%.4f", shadow) +
                " < eps/2 = 0.25"};
}

Outcome composition() {
    const double theta = 1.0;
    const Quad z = rhombus(theta).vertices;
    std::size_t pairs = 0, bad = 0;
    for (int n1 = 1; n1 <= 4; ++n1) {
        for (int n2 = 1; n2 <= 4; ++n2) {
            for (const auto& s1 : all_permutations(n1)) {
                for (const auto& s2 : all_permutations(n2)) {
                    ++pairs;
                    const auto nested = oracle_map(s1, oracle_map(s2, {z}, theta), theta);
                    if (!same_vertex_sets(nested, apply_map_rhombus(compose(s1, s2), theta), kVertexTol)) ++bad;
                }
            }
        }
    }
    return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " mismatching"};
}

Outcome mirror_exactness() {
    const double theta = kPi / 4.0, eps = 0.5;
    const double alpha = 9.0 * kPi / 8.0;
    const InvisibleMirror m = build_invisible_mirror(theta, eps, AlphaSpec{{alpha}, 64}, 64);
    const MirrorReport r = verify_mirror(m.g, theta, eps, 1000, {alpha});
    const MirrorPartOne& p = r.part_one;
    const bool pass = m.report.n_star <= 64 && p.failures == 0 && p.max_angle_error <= kAngleTol &&
                      p.degenerate <= static_cast<std::size_t>(m.report.n_star) && p.min_offset >= -kEpsGeom &&
                      p.max_offset <= 1.0 + kEpsGeom;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "n* %d, one-bounce %zu/1000, degenerate %zu, failures %zu, max angle err %.1e, offsets [%.4f, %.4f]",
                  m.report.n_star, p.one_bounce, p.degenerate, p.failures, p.max_angle_error, p.min_offset,
                  p.max_offset);
    return {pass, buf};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPECULAR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome round_trips() {
    std::mt19937_64 g(kSeed + 5);
    std::size_t bad = 0;
    for (int i = 0; i < 100; ++i) {
        Scene s = random_segments(g, 1 + i * 7, 10.0, 3.0);
        s.set_meta("index", std::to_string(i));
        const Scene back = read_scene_string(write_scene_string(s));
        if (back.segments != s.segments || back.metadata != s.metadata) ++bad;
    }
    const std::string args = "build-mirror --theta 0.7853981633974483 --eps 0.5 --alpha 3.5342917352885173 "
                             "--budget 64 --rays 200";
    const std::string invocation = "--out acc_cli.json " + args + " --svg acc_cli.svg";
    const int a = run_cli(invocation);
    const std::string ja = slurp("acc_cli.json"), sa = slurp("acc_cli.svg");
    const int b = run_cli(invocation);
    const std::string jb = slurp("acc_cli.json"), sb = slurp("acc_cli.svg");
    const bool json_same = !ja.empty() && ja == jb;
    const bool svg_same = !sa.empty() && sa == sb;
    return {bad == 0 && a == 0 && b == 0 && json_same && svg_same,
            "100 scenes, " + std::to_string(bad) + " mismatches; CLI JSON identical " + (json_same ? "yes" : "no") +
                ", SVG identical " + (svg_same ? "yes" : "no")};
}

}  // namespace

int main() {
    std::printf("specular acceptance run\n");
    report(1, "reflection exactness", 1.0, reflection);
    report(2, "interval set oracle", 10.0, interval_oracle);
    report(3, "bundle conservation", 120.0, conservation);
    report(4, "block verification", 60.0, block_verification);
    report(5, "nu2 calibration", 0.0, nu2_calibration);
    report(6, "urchin pipeline", 600.0, urchin_ladder);
    report(7, "chain algorithm", 5.0, chains);
    report(8, "chain projection identity", 60.0, chain_identity);
    report(9, "composition correctness", 10.0, composition);
    report(10, "mirror exactness", 30.0, mirror_exactness);
    report(11, "round trips", 0.0, round_trips);
    std::printf("%d of 11 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
