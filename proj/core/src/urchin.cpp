/**
 * @file urchin.cpp
 * @brief Parameter solver and assembly of the sea-urchin set.
 */
#include "specular/urchin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specular/block.hpp"
#include "specular/error.hpp"
#include "specular/scene_io.hpp"

namespace specular {

double UrchinParams::theta1() const { return kTwoPi / n; }

double UrchinParams::q() const { return 2.0 * r1 * std::sin(kPi / n); }

Point UrchinParams::a(int k) const { return unit((k - 0.5) * kTwoPi / n) * r1; }

void refresh(UrchinParams& p) {
    const double nn = static_cast<double>(p.n);
    p.rho = p.q() / (1.0 + 2.0 * p.eps1);
    p.ineq1_lhs = p.eps1 * p.rho * nn * nn / (kPi * p.r1);
    p.ineq1_rhs = p.eps / (16.0 * kPi);
    p.ineq2_lhs = nn * p.eps1;
    p.ineq2_rhs = p.eps / (16.0 * nn);
    p.strict = p.ineq1_lhs < p.ineq1_rhs && p.ineq2_lhs < p.ineq2_rhs;
}

UrchinParams solve_parameters(double eps, const UrchinOverrides& overrides) {
    require(eps > 0.0 && eps <= 1.0, "solve_parameters: eps must lie in (0, 1]");
    UrchinParams p;
    p.eps = eps;

    if (overrides.n) {
        const int n = *overrides.n;
        if (n < 4 || n % 4 != 0) {
            throw Error(ErrorCode::infeasible, "solve_parameters: N must be a positive multiple of 4");
        }
        if (!(kTwoPi / n < kArctanThird)) {
            throw Error(ErrorCode::infeasible, "solve_parameters: theta1 = 2 pi / N must be below arctan(1/3)");
        }
        p.n = n;
    } else {
        int n = 4;
        while (!(kTwoPi / n < kArctanThird)) n += 4;
        p.n = n;
    }

    p.r1 = overrides.r1.value_or(0.1);
    if (!(p.r1 > 0.0 && p.r1 < 1.0)) {
        throw Error(ErrorCode::infeasible, "solve_parameters: r1 must lie in (0, 1)");
    }

    // Supremum of eps1 under both inequalities, with rho = q / (1 + 2 eps1).
    const double nn = static_cast<double>(p.n);
    const double sup2 = eps / (16.0 * nn * nn);
    const double c = eps * p.r1 / (16.0 * nn * nn) / p.q();  // eps1 / (1 + 2 eps1) < c
    const double sup1 = 2.0 * c < 1.0 ? c / (1.0 - 2.0 * c) : 1.0;
    p.eps1 = 0.999 * std::min(sup1, sup2);

    if (overrides.eps1_floor && *overrides.eps1_floor > p.eps1) {
        require(*overrides.eps1_floor < 1.0, "solve_parameters: eps1 floor must be below 1");
        p.eps1 = *overrides.eps1_floor;
    }
    refresh(p);
    return p;
}

std::array<Point, 4> rectangle_M(int k, const UrchinParams& p) {
    require(k >= 0 && k < p.n, "rectangle_M: spike index out of range");
    const Point ak = p.a(k), ak1 = p.a(k + 1);
    const Point side = ak1 - ak;
    // Unit normal to the inner side, pointing away from the origin.
    Point d = Point(side.y, -side.x) / side.norm();
    if (d.dot(ak) < 0.0) d = -d;
    auto to_circle = [&](Point x) {
        // Larger root of |x + t d| = 1.
        const double b = x.dot(d);
        const double t = -b + std::sqrt(b * b - (x.dot(x) - 1.0));
        return x + d * t;
    };
    return {ak, ak1, to_circle(ak1), to_circle(ak)};
}

int j_star(const UrchinParams& p) {
    const auto m = rectangle_M(0, p);
    const double x0 = m[0].x;
    const double x_out = std::min(m[2].x, m[3].x);
    const double q = p.q();
    return static_cast<int>(std::floor((x_out - x0) / q + 1e-12)) - 1;
}

Point translation_T(int j, const UrchinParams& p) {
    const Point corner(-p.rho * p.eps1, -p.rho * p.eps1);
    return p.a(0) + Point(j * p.q(), 0.0) - corner;
}

UrchinScene build_urchin(const UrchinParams& p, const Scene& block) {
    const int js = j_star(p);
    if (js < 0) {
        throw Error(ErrorCode::block_too_wide, "build_urchin: no translated block fits in M'_0");
    }
    UrchinScene out;
    out.j_star = js;
    out.block_count = block.size();
    const std::size_t per_spike = block.size() * static_cast<std::size_t>(js + 1);
    out.scene.segments.reserve(per_spike * static_cast<std::size_t>(p.n));
    out.provenance.reserve(per_spike * static_cast<std::size_t>(p.n));

    std::vector<Segment> spike0;
    spike0.reserve(per_spike);
    std::vector<int> spike0_j;
    for (int j = 0; j <= js; ++j) {
        const Point t = translation_T(j, p);
        for (const auto& s : block.segments) {
            spike0.push_back(Segment{s.p + t, s.q + t});
            spike0_j.push_back(j);
        }
    }
    for (int k = 0; k < p.n; ++k) {
        const double phi = kTwoPi * k / p.n;
        const double c = std::cos(phi), s = std::sin(phi);
        auto rot = [c, s](Point x) { return Point(c * x.x - s * x.y, s * x.x + c * x.y); };
        for (std::size_t i = 0; i < spike0.size(); ++i) {
            out.scene.segments.push_back(Segment{rot(spike0[i].p), rot(spike0[i].q)});
            out.provenance.push_back(Provenance{k, spike0_j[i]});
        }
    }
    return out;
}

void annotate_urchin(UrchinScene& urchin, const UrchinParams& p) {
    Scene& sc = urchin.scene;
    sc.set_meta("kind", "urchin");
    sc.set_meta("urchin.eps", format_double(p.eps));
    sc.set_meta("urchin.n", std::to_string(p.n));
    sc.set_meta("urchin.r1", format_double(p.r1));
    sc.set_meta("urchin.eps1", format_double(p.eps1));
    sc.set_meta("urchin.j_star", std::to_string(urchin.j_star));
    sc.set_meta("urchin.block_segments", std::to_string(urchin.block_count));
}

namespace {

double meta_number(const Scene& scene, const std::string& key) {
    const std::string v = scene.meta(key);
    if (v.empty()) throw Error(ErrorCode::parse_error, "urchin metadata '" + key + "' missing");
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, "urchin metadata '" + key + "' is not a number");
    }
}

}  // namespace

UrchinParams urchin_params_from_metadata(const Scene& scene) {
    UrchinParams p;
    p.eps = meta_number(scene, "urchin.eps");
    p.n = static_cast<int>(meta_number(scene, "urchin.n"));
    p.r1 = meta_number(scene, "urchin.r1");
    p.eps1 = meta_number(scene, "urchin.eps1");
    require(p.n >= 4 && p.n % 4 == 0, "urchin metadata: N must be a positive multiple of 4");
    refresh(p);
    return p;
}

UrchinScene urchin_from_scene(Scene scene, const UrchinParams& p) {
    UrchinScene out;
    out.j_star = j_star(p);
    const std::size_t total = scene.size();
    const std::size_t rows = static_cast<std::size_t>(std::max(out.j_star, 0) + 1);
    const std::size_t per_spike = total / static_cast<std::size_t>(p.n);
    if (out.j_star < 0 || per_spike * static_cast<std::size_t>(p.n) != total || per_spike % rows != 0) {
        throw Error(ErrorCode::parse_error, "urchin scene: segment count does not match N and j*");
    }
    out.block_count = per_spike / rows;
    out.provenance.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        out.provenance.push_back(Provenance{static_cast<int>(i / per_spike),
                                            static_cast<int>((i % per_spike) / std::max<std::size_t>(out.block_count, 1))});
    }
    out.scene = std::move(scene);
    return out;
}

}  // namespace specular
