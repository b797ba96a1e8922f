/**
 * @file measure.cpp
 * @brief Stratified line sampling, nu2 estimates and the invisibility report.
 */
#include "specular/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "specular/parallel.hpp"
#include "specular/tracer.hpp"

namespace specular {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Nearest-rank quantile of a sorted vector.
double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[std::min(v.size() - 1, rank == 0 ? 0 : rank - 1)];
}

double ci_half_width(double f, std::size_t n) {
    if (n == 0) return 0.0;
    return kZ95 * std::sqrt(f * (1.0 - f) / static_cast<double>(n));
}

double fraction(std::size_t count, std::size_t n) {
    return n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
}

bool same_direction(const Direction& a, const Direction& b) { return (a.vec() - b.vec()).norm() <= 1e-9; }

struct SampleOutcome {
    bool hit{false};
    bool degenerate{false};
    bool cap_exceeded{false};
    bool same{false};
    double displacement{0.0};
};

SampleOutcome evaluate(const SceneIndex& index, const DirectedLine& line, int cap) {
    SampleOutcome o;
    const RayPath path = trace(index, line.v, line.w, cap);
    o.hit = path.hit();
    o.degenerate = path.degenerate();
    o.cap_exceeded = path.status == TraceStatus::cap_exceeded;
    if (o.hit && !o.degenerate) {
        o.same = same_direction(path.exit.v, line.v);
        o.displacement = (path.exit.w - line.w).norm();
    }
    return o;
}

Theorem1Report aggregate(const std::vector<SampleOutcome>& out, double eps, std::uint64_t seed, int cap) {
    Theorem1Report r;
    r.n_samples = out.size();
    r.seed = seed;
    r.eps = eps;
    r.cap = cap;
    std::size_t clean_hits = 0, same = 0, small = 0, good = 0;
    std::vector<double> disp;
    for (const auto& o : out) {
        if (o.hit) ++r.hits;
        if (o.degenerate) ++r.degenerate;
        if (o.cap_exceeded) ++r.cap_exceeded;
        if (!o.hit || o.degenerate) continue;
        ++clean_hits;
        disp.push_back(o.displacement);
        if (o.same) ++same;
        if (o.displacement <= eps) ++small;
        if (o.same && o.displacement <= eps) ++good;
    }
    std::sort(disp.begin(), disp.end());
    r.hit_fraction = fraction(r.hits, r.n_samples);
    r.same_direction_fraction = fraction(same, clean_hits);
    r.small_displacement_fraction = fraction(small, clean_hits);
    r.good_fraction = fraction(good, r.n_samples);
    r.displacement_median = quantile_sorted(disp, 0.5);
    r.displacement_p90 = quantile_sorted(disp, 0.9);
    r.displacement_max = disp.empty() ? 0.0 : disp.back();
    r.hit_ci = ci_half_width(r.hit_fraction, r.n_samples);
    r.same_direction_ci = ci_half_width(r.same_direction_fraction, clean_hits);
    r.good_ci = ci_half_width(r.good_fraction, r.n_samples);
    r.nu2_not_good = kNu2Total * (1.0 - r.good_fraction);
    return r;
}

std::vector<SampleOutcome> run_samples(const SceneIndex& index, std::size_t n, std::uint64_t seed, int threads,
                                       int cap) {
    const auto samples = sample_lines(n, seed);
    std::vector<SampleOutcome> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { out[i] = evaluate(index, samples[i].line(), cap); }, threads);
    return out;
}

enum class BundleStage { missed, early, spike_bad, far_hit, kept, degenerate };

BundleStage classify_bundle_ray(const SceneIndex& all, const SceneIndex& others, const std::vector<char>& own,
                                const DirectedLine& line, double eps, int cap) {
    const RayPath path = trace(all, line.v, line.w, cap);
    if (path.degenerate()) return BundleStage::degenerate;
    if (!path.hit()) return BundleStage::missed;
    if (!own[path.hit_segments.front()]) return BundleStage::early;
    std::size_t last = 0;
    while (last + 1 < path.outgoing.size() && own[path.hit_segments[last + 1]]) ++last;
    const DirectedLine exit = DirectedLine::through(Direction::from_vector(path.outgoing[last]), path.reflections[last]);
    if (!same_direction(exit.v, line.v) || (exit.w - line.w).norm() > eps) return BundleStage::spike_bad;
    if (!others.empty()) {
        const RayPath probe = trace(others, exit.v, exit.w, 1);
        if (probe.hit()) return BundleStage::far_hit;
    }
    return BundleStage::kept;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

std::vector<LineSample> sample_lines(std::size_t n, std::uint64_t seed) {
    std::vector<LineSample> out(n);
    if (n == 0) return out;
    const std::size_t strata = (n + 1) / 2;
    const double weight = kNu2Total / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::mt19937_64 g(derive_seed(seed, i));
        const double u = uniform01(g);
        const double r = uniform01(g);
        const double theta = kTwoPi * (static_cast<double>(i / 2) + u) / static_cast<double>(strata);
        out[i] = LineSample{std::min(theta, std::nextafter(kTwoPi, 0.0)), r, i % 2 == 0 ? 1 : -1, weight};
    }
    return out;
}

Nu2Estimate nu2_from_count(std::size_t hits, std::size_t n) {
    Nu2Estimate e;
    e.n = n;
    e.fraction = fraction(hits, n);
    e.measure = kNu2Total * e.fraction;
    e.ci = kNu2Total * ci_half_width(e.fraction, n);
    return e;
}

Nu2Estimate nu2_estimate(const std::vector<LineSample>& samples,
                         const std::function<bool(const Direction&, Point)>& event) {
    std::size_t hits = 0;
    for (const auto& s : samples) {
        if (event(s.v(), s.w())) ++hits;
    }
    return nu2_from_count(hits, samples.size());
}

Theorem1Report theorem1_report(const Scene& scene, double eps, std::size_t n, std::uint64_t seed, int threads,
                               int cap) {
    const SceneIndex index(scene);
    return aggregate(run_samples(index, n, seed, threads, cap), eps, seed, cap);
}

Theorem1Report theorem1_report(const UrchinScene& urchin, const UrchinParams& params, double eps, std::size_t n,
                               std::uint64_t seed, int threads, int cap, std::size_t bundle_samples) {
    const SceneIndex index(urchin.scene);
    Theorem1Report r = aggregate(run_samples(index, n, seed, threads, cap), eps, seed, cap);
    if (bundle_samples == 0) return r;

    // M_0 is the double rectangle made of spikes 0 and N/2.
    const int half = params.n / 2;
    std::vector<char> own(urchin.scene.segments.size(), 0);
    std::vector<Segment> other_segments, spike0_segments;
    for (std::size_t i = 0; i < urchin.scene.segments.size(); ++i) {
        own[i] = urchin.provenance[i].k % half == 0;
        (own[i] ? spike0_segments : other_segments).push_back(urchin.scene.segments[i]);
    }
    const SceneIndex others(std::move(other_segments));
    const SceneIndex spike0(std::move(spike0_segments));
    const double theta1 = params.theta1();
    std::vector<BundleStage> stages(bundle_samples);
    std::vector<char> misses0(bundle_samples, 0);
    parallel_for(bundle_samples, [&](std::size_t i) {
        std::mt19937_64 g(derive_seed(seed ^ 0xB6B6B6B6ULL, i));
        const double theta = theta1 * (static_cast<double>(i) + uniform01(g)) / static_cast<double>(bundle_samples);
        const double s = -1.0 + 2.0 * uniform01(g);
        const DirectedLine line{Direction::from_angle(theta + kPi / 2.0), unit(theta) * s};
        stages[i] = classify_bundle_ray(index, others, own, line, eps, cap);
        misses0[i] = spike0.empty() || !trace(spike0, line.v, line.w, 1).hit();
    }, threads);

    BundleLedger& b = r.bundles;
    b.n_samples = bundle_samples;
    b.b6 = 2.0 * theta1;
    std::size_t missed = 0, early = 0, spike_bad = 0, far_hit = 0;
    for (auto st : stages) {
        switch (st) {
            case BundleStage::missed: ++missed; break;
            case BundleStage::early: ++early; break;
            case BundleStage::spike_bad: ++spike_bad; break;
            case BundleStage::far_hit: ++far_hit; break;
            case BundleStage::degenerate: ++b.degenerate; break;
            case BundleStage::kept: break;
        }
    }
    const double unit_mass = b.b6 / static_cast<double>(bundle_samples);
    b.b6_minus_b7 = unit_mass * static_cast<double>(missed);
    b.b7_minus_b8 = unit_mass * static_cast<double>(early + b.degenerate);
    b.b6_minus_b8 = b.b6_minus_b7 + b.b7_minus_b8;
    b.b6_minus_b9 = b.b6_minus_b8 + unit_mass * static_cast<double>(spike_bad);
    b.b6_minus_b10 = b.b6_minus_b9 + unit_mass * static_cast<double>(far_hit);
    b.b6_minus_b11 = b.b6_minus_b10;
    b.miss_spike0 = unit_mass * static_cast<double>(std::count(misses0.begin(), misses0.end(), 1));
    b.nu2_miss_own_spike = params.n * b.miss_spike0;
    const double unit_ref = eps / (8.0 * params.n);
    b.ref_b6_minus_b7 = unit_ref;
    b.ref_b6_minus_b8 = 3.0 * unit_ref;
    b.ref_b6_minus_b9 = 4.0 * unit_ref;
    b.ref_b6_minus_b10 = 6.0 * unit_ref;
    return r;
}

}  // namespace specular
