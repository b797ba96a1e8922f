/**
 * @file block.cpp
 * @brief Block verification and the deterministic greedy block search.
 */
#include "specular/block.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specular/error.hpp"
#include "specular/parallel.hpp"
#include "specular/projection.hpp"

namespace specular {

std::array<Segment, 3> diamond_segments(const Diamond& d) {
    const Point x1 = d.x1, x2 = d.x2(), x3 = d.x3(), x4 = d.x4();
    return {Segment{x1, x3}, Segment{x2, x4}, Segment{(x1 + x2) * 0.5, (x3 + x4) * 0.5}};
}

void validate(const BlockSpec& spec) {
    require(spec.rho > 0.0, "block: rho must be positive");
    require(spec.theta1 > 0.0 && spec.theta1 < kArctanThird, "block: theta1 must lie in (0, arctan(1/3))");
    require(spec.eps > 0.0 && spec.eps < 1.0, "block: eps must lie in (0, 1)");
    require(spec.max_levels >= 0, "block: max_levels must be non-negative");
}

namespace {

bool slope_minus_one(const Segment& s) {
    const Point d = s.q - s.p;
    const double scale = std::max(std::abs(d.x), std::abs(d.y));
    return scale > 0.0 && std::abs(d.x + d.y) <= 1e-12 * std::max(1.0, scale) + 1e-15;
}

bool inside_q(const BoundingBox& b, double eps, double rho) {
    const double lo = -rho * eps, hi = rho * (1.0 + eps);
    return b.lo.x > lo && b.lo.y > lo && b.hi.x < hi && b.hi.y < hi;
}

}  // namespace

BlockReport verify_block(const Scene& scene, const BlockSpec& spec, double grid_step, int threads) {
    validate(spec);
    for (const auto& s : scene.segments) {
        require(slope_minus_one(s), "verify_block: every segment must have slope -1");
    }
    const double rho = spec.rho, eps = spec.eps;
    const std::span<const Segment> segs(scene.segments);

    BlockReport r;
    r.grid_step = grid_step;
    r.segment_count = scene.size();
    r.diameter = scene.diameter();
    r.diameter_bound = 3.0 * std::sqrt(2.0) * rho;
    r.contained = !scene.empty() && inside_q(scene.bounds(), eps, rho);

    const auto grid1 = angle_grid(0.0, spec.theta1, grid_step);
    const auto grid2 = angle_grid(spec.theta1, kPi, grid_step);
    std::vector<double> sd(grid1.size()), sh(grid2.size());
    parallel_for(grid1.size(), [&](std::size_t i) { sd[i] = symdiff_measure(segs, grid1[i], rho); }, threads);
    parallel_for(grid2.size(), [&](std::size_t i) { sh[i] = shadow_measure(segs, grid2[i]); }, threads);

    // The estimates are exactly those of bad_angle_measure with the two predicates.
    std::size_t bad1 = 0, bad2 = 0;
    for (double v : sd) {
        if (v <= eps * rho) {
            r.max_symdiff_good = std::max(r.max_symdiff_good, v);
        } else {
            ++bad1;
        }
    }
    for (double v : sh) {
        if (v <= eps * rho) {
            r.max_shadow_good = std::max(r.max_shadow_good, v);
        } else {
            ++bad2;
        }
    }
    r.bad_range1 = grid_step * static_cast<double>(bad1);
    r.bad_range2 = grid_step * static_cast<double>(bad2);
    r.accepted = r.bad_range1 <= eps && r.bad_range2 <= eps && r.contained && r.diameter < r.diameter_bound;
    return r;
}

namespace {

/// Square-root hinge on the per-angle excess.
double penal(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

/// Greedy refinement of one candidate family at rho = 1.
class GreedyBuilder {
public:
    GreedyBuilder(double theta_r, double theta1, double eps, int threads)
        : theta_r_(theta_r), theta1_(theta1), eps_(eps), threads_(threads),
          perp_(unit(theta_r + kPi / 2.0)) {
        const double h = 1.0 / (std::cos(theta_r) - std::sin(theta_r));
        dir_ = Point(h, -h);
        segs_.push_back(Segment{Point(0.0, 0.0), dir_});
        grid1_ = angle_grid(0.0, theta1, kCoarse1);
        grid2_ = angle_grid(theta1, kPi, kCoarse2);
        for (int k = 0; k < kNeedles; ++k) {
            needles_.push_back(theta1 + (k + 0.5) * (kPi - theta1) / kNeedles);
        }
        center();
        evaluate_current();
    }

    const std::vector<Segment>& segments() const { return segs_; }
    double coarse_bad1() const { return bad1_; }
    double coarse_bad2() const { return bad2_; }

    /// Applies one refinement level; returns the chosen needle or NaN when no candidate fits.
    double refine() {
        const Point half = dir_ * 0.5;
        std::vector<Segment> h1(segs_.size()), h2(segs_.size());
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            h1[i] = Segment{segs_[i].p, segs_[i].p + half};
            h2[i] = Segment{segs_[i].p + half, segs_[i].q};
        }
        const BoundingBox b1 = bounds_of(h1), b2 = bounds_of(h2);

        const std::size_t k_count = needles_.size();
        std::vector<Point> shift(k_count);
        std::vector<double> center_t(k_count);
        std::vector<char> feasible(k_count, 0);
        for (std::size_t k = 0; k < k_count; ++k) {
            const Point u = unit(needles_[k]);
            const double sn = std::sin(needles_[k] - theta_r_);
            if (std::abs(sn) < 1e-6) continue;
            shift[k] = perp_ * (-half.dot(u) / sn);
            BoundingBox b = b1;
            b.lo.x = std::min(b.lo.x, b2.lo.x + shift[k].x);
            b.lo.y = std::min(b.lo.y, b2.lo.y + shift[k].y);
            b.hi.x = std::max(b.hi.x, b2.hi.x + shift[k].x);
            b.hi.y = std::max(b.hi.y, b2.hi.y + shift[k].y);
            if (auto t = centering(b)) {
                feasible[k] = 1;
                center_t[k] = *t;
            }
        }

        // Objective per candidate: excess shadow over both coarse grids.
        const std::size_t n1 = grid1_.size(), n2 = grid2_.size();
        std::vector<double> excess(k_count * (n1 + n2), 0.0);
        parallel_for(n1 + n2, [&](std::size_t gi) {
            const bool first = gi < n1;
            const double th = first ? grid1_[gi] : grid2_[gi - n1];
            const Point u = unit(th);
            const auto a = merged_projection(h1, u);
            const auto b = merged_projection(h2, u);
            const double s = perp_.dot(u);
            for (std::size_t k = 0; k < k_count; ++k) {
                if (!feasible[k]) continue;
                const double base = first ? center_t[k] * s : 0.0;
                const auto [total, inside] = union_with_offset(a, base, b, base + shift[k].dot(u));
                const double v = first ? total + 1.0 - 2.0 * inside : total;
                excess[k * (n1 + n2) + gi] = penal(std::max(v - eps_, 0.0));
            }
        }, threads_);

        double best = std::numeric_limits<double>::infinity();
        std::size_t best_k = k_count;
        for (std::size_t k = 0; k < k_count; ++k) {
            if (!feasible[k]) continue;
            double score = 0.0;
            for (std::size_t gi = 0; gi < n1; ++gi) score += excess[k * (n1 + n2) + gi] * kCoarse1;
            for (std::size_t gi = n1; gi < n1 + n2; ++gi) score += excess[k * (n1 + n2) + gi] * kCoarse2;
            if (score < best) {
                best = score;
                best_k = k;
            }
        }
        if (best_k == k_count) return std::numeric_limits<double>::quiet_NaN();

        std::vector<Segment> next;
        next.reserve(2 * segs_.size());
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            next.push_back(h1[i]);
            next.push_back(Segment{h2[i].p + shift[best_k], h2[i].q + shift[best_k]});
        }
        segs_ = std::move(next);
        dir_ = half;
        center();
        evaluate_current();
        return needles_[best_k];
    }

private:
    static constexpr double kCoarse1 = 0.005;
    static constexpr double kCoarse2 = 0.01;
    static constexpr int kNeedles = 64;

    static BoundingBox bounds_of(const std::vector<Segment>& segs) {
        Scene s;
        s.segments = segs;
        return s.bounds();
    }

    /// Offset t along perp_ placing the box inside Q_eps, at the middle of the feasible range.
    std::optional<double> centering(const BoundingBox& b) const {
        const double lo = -eps_, hi = 1.0 + eps_;
        double tmin = -std::numeric_limits<double>::infinity();
        double tmax = std::numeric_limits<double>::infinity();
        auto constrain = [&](double c, double vmin, double vmax) {
            // vmin + t c > lo and vmax + t c < hi
            if (std::abs(c) < 1e-15) {
                if (!(vmin > lo && vmax < hi)) tmin = std::numeric_limits<double>::infinity();
                return;
            }
            double a = (lo - vmin) / c, z = (hi - vmax) / c;
            if (c < 0.0) std::swap(a, z);
            tmin = std::max(tmin, a);
            tmax = std::min(tmax, z);
        };
        constrain(perp_.x, b.lo.x, b.hi.x);
        constrain(perp_.y, b.lo.y, b.hi.y);
        if (!(tmin < tmax)) return std::nullopt;
        return 0.5 * (tmin + tmax);
    }

    void center() {
        const auto t = centering(bounds_of(segs_));
        const double shift = t ? *t : 0.0;
        for (auto& s : segs_) {
            s.p += perp_ * shift;
            s.q += perp_ * shift;
        }
    }

    static std::vector<Interval> merged_projection(const std::vector<Segment>& segs, Point u) {
        std::vector<Interval> raw(segs.size());
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const double a = segs[i].p.dot(u), b = segs[i].q.dot(u);
            raw[i] = a < b ? Interval{a, b} : Interval{b, a};
        }
        std::sort(raw.begin(), raw.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        std::vector<Interval> out;
        for (const auto& iv : raw) {
            if (!out.empty() && iv.lo <= out.back().hi) {
                out.back().hi = std::max(out.back().hi, iv.hi);
            } else {
                out.push_back(iv);
            }
        }
        return out;
    }

    /// Measure of (a + oa) u (b + ob) and of its intersection with [0, 1].
    static std::pair<double, double> union_with_offset(const std::vector<Interval>& a, double oa,
                                                       const std::vector<Interval>& b, double ob) {
        double total = 0.0, inside = 0.0;
        double lo = 0.0, hi = 0.0;
        bool open = false;
        auto flush = [&] {
            total += hi - lo;
            const double x = std::max(lo, 0.0), y = std::min(hi, 1.0);
            if (y > x) inside += y - x;
        };
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            Interval iv;
            if (j >= b.size() || (i < a.size() && a[i].lo + oa <= b[j].lo + ob)) {
                iv = {a[i].lo + oa, a[i].hi + oa};
                ++i;
            } else {
                iv = {b[j].lo + ob, b[j].hi + ob};
                ++j;
            }
            if (open && iv.lo <= hi) {
                hi = std::max(hi, iv.hi);
            } else {
                if (open) flush();
                lo = iv.lo;
                hi = iv.hi;
                open = true;
            }
        }
        if (open) flush();
        return {total, inside};
    }

    void evaluate_current() {
        std::size_t b1 = 0, b2 = 0;
        const std::span<const Segment> segs(segs_);
        std::vector<char> bad(grid1_.size() + grid2_.size(), 0);
        parallel_for(bad.size(), [&](std::size_t gi) {
            if (gi < grid1_.size()) {
                bad[gi] = symdiff_measure(segs, grid1_[gi], 1.0) > eps_;
            } else {
                bad[gi] = shadow_measure(segs, grid2_[gi - grid1_.size()]) > eps_;
            }
        }, threads_);
        for (std::size_t gi = 0; gi < bad.size(); ++gi) {
            if (!bad[gi]) continue;
            (gi < grid1_.size() ? b1 : b2)++;
        }
        bad1_ = kCoarse1 * static_cast<double>(b1);
        bad2_ = kCoarse2 * static_cast<double>(b2);
    }

    double theta_r_, theta1_, eps_;
    int threads_;
    Point perp_;
    Point dir_;
    std::vector<Segment> segs_;
    std::vector<double> grid1_, grid2_, needles_;
    double bad1_{0.0}, bad2_{0.0};
};

}  // namespace

BlockSearchResult search_block(const BlockSpec& spec, double grid_step, int threads) {
    validate(spec);
    BlockSpec unit_spec = spec;
    unit_spec.rho = 1.0;

    BlockSearchResult result;
    double best_excess = std::numeric_limits<double>::infinity();
    std::vector<Segment> best;

    for (double frac : {0.65, 0.5, 0.8}) {
        const double theta_r = frac * spec.theta1;
        GreedyBuilder g(theta_r, spec.theta1, spec.eps, threads);
        for (int level = 0; level <= spec.max_levels; ++level) {
            double needle = std::numeric_limits<double>::quiet_NaN();
            if (level > 0) {
                needle = g.refine();
                if (std::isnan(needle)) break;
            }
            BlockSearchStep step{theta_r, level, needle, g.coarse_bad1(), g.coarse_bad2(), false, false};
            const double excess = std::max(g.coarse_bad1() - spec.eps, 0.0) + std::max(g.coarse_bad2() - spec.eps, 0.0);
            if (excess < best_excess) {
                best_excess = excess;
                best = g.segments();
            }
            if (excess == 0.0) {
                Scene candidate;
                candidate.segments = g.segments();
                step.verified = true;
                const BlockReport rep = verify_block(candidate, unit_spec, grid_step, threads);
                step.accepted = rep.accepted;
                if (rep.accepted) {
                    result.steps.push_back(step);
                    result.scene = scaled(candidate, spec.rho);
                    result.report = verify_block(result.scene, spec, grid_step, threads);
                    result.accepted = result.report.accepted;
                    return result;
                }
            }
            result.steps.push_back(step);
        }
    }

    result.scene.segments = best;
    result.scene = scaled(result.scene, spec.rho);
    result.report = verify_block(result.scene, spec, grid_step, threads);
    result.accepted = false;
    return result;
}

Scene build_block(const BlockSpec& spec, double grid_step, int threads) {
    auto res = search_block(spec, grid_step, threads);
    if (!res.accepted) {
        throw Error(ErrorCode::budget_exhausted,
                    "build_block: no candidate passed verify_block within " +
                        std::to_string(spec.max_levels) + " levels");
    }
    return std::move(res.scene);
}

}  // namespace specular
