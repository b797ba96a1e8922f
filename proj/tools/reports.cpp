/**
 * @file reports.cpp
 * @brief JSON serialization of pipeline reports.
 */
#include "reports.hpp"

#include "specular/interval_set.hpp"
#include "specular/version.hpp"

namespace specular::cli {

Json report_header(const std::string& command, const std::vector<std::string>& argv) {
    Json j;
    j["tool"] = "specular";
    j["version"] = kVersion;
    j["command"] = command;
    j["argv"] = argv;
    j["tolerances"] = {{"geometry", kEpsGeom}, {"interval_merge_gap", kMergeGap}, {"direction_match", 1e-9}};
    return j;
}

Json to_json(Point p) { return Json::array({p.x, p.y}); }

Json to_json(const Segment& s) { return Json::array({s.p.x, s.p.y, s.q.x, s.q.y}); }

Json to_json(const DirectedLine& l) {
    return Json{{"angle", l.v.angle()}, {"v", to_json(l.v.vec())}, {"w", to_json(l.w)}};
}

Json to_json(const IntervalSet& s) {
    Json arr = Json::array();
    for (const auto& iv : s.intervals()) arr.push_back(Json::array({iv.lo, iv.hi}));
    return arr;
}

Json to_json(const BlockReport& r) {
    return Json{{"accepted", r.accepted},
                {"bad_range1", r.bad_range1},
                {"bad_range2", r.bad_range2},
                {"max_symdiff_good", r.max_symdiff_good},
                {"max_shadow_good", r.max_shadow_good},
                {"contained", r.contained},
                {"diameter", r.diameter},
                {"diameter_bound", r.diameter_bound},
                {"segment_count", r.segment_count},
                {"grid_step", r.grid_step}};
}

Json to_json(const BlockSearchStep& s) {
    return Json{{"theta_r", s.theta_r},         {"level", s.level},       {"needle", s.needle},
                {"coarse_bad1", s.coarse_bad1}, {"coarse_bad2", s.coarse_bad2}, {"verified", s.verified},
                {"accepted", s.accepted}};
}

Json to_json(const UrchinParams& p) {
    return Json{{"eps", p.eps},
                {"n", p.n},
                {"r1", p.r1},
                {"theta1", p.theta1()},
                {"q", p.q()},
                {"rho", p.rho},
                {"eps1", p.eps1},
                {"strict", p.strict},
                {"ineq1", {{"lhs", p.ineq1_lhs}, {"rhs", p.ineq1_rhs}}},
                {"ineq2", {{"lhs", p.ineq2_lhs}, {"rhs", p.ineq2_rhs}}}};
}

Json to_json(const BundleLedger& b) {
    return Json{{"n_samples", b.n_samples},
                {"b6", b.b6},
                {"b6_minus_b7", b.b6_minus_b7},
                {"b7_minus_b8", b.b7_minus_b8},
                {"b6_minus_b8", b.b6_minus_b8},
                {"b6_minus_b9", b.b6_minus_b9},
                {"b6_minus_b10", b.b6_minus_b10},
                {"b6_minus_b11", b.b6_minus_b11},
                {"miss_spike0", b.miss_spike0},
                {"nu2_miss_own_spike", b.nu2_miss_own_spike},
                {"degenerate", b.degenerate},
                {"reference",
                 {{"b6_minus_b7", b.ref_b6_minus_b7},
                  {"b6_minus_b8", b.ref_b6_minus_b8},
                  {"b6_minus_b9", b.ref_b6_minus_b9},
                  {"b6_minus_b10", b.ref_b6_minus_b10}}}};
}

Json to_json(const Theorem1Report& r) {
    Json j{{"n_samples", r.n_samples},
           {"seed", r.seed},
           {"eps", r.eps},
           {"bounce_cap", r.cap},
           {"hit_fraction", r.hit_fraction},
           {"hit_ci", r.hit_ci},
           {"same_direction_fraction", r.same_direction_fraction},
           {"same_direction_ci", r.same_direction_ci},
           {"displacement", {{"median", r.displacement_median}, {"p90", r.displacement_p90}, {"max", r.displacement_max}}},
           {"small_displacement_fraction", r.small_displacement_fraction},
           {"good_fraction", r.good_fraction},
           {"good_ci", r.good_ci},
           {"nu2_not_good", r.nu2_not_good},
           {"hits", r.hits},
           {"degenerate", r.degenerate},
           {"cap_exceeded", r.cap_exceeded}};
    if (r.bundles.n_samples > 0) j["bundles"] = to_json(r.bundles);
    return j;
}

Json to_json(const RayPath& p) {
    Json pts = Json::array();
    for (const auto& x : p.reflections) pts.push_back(to_json(x));
    return Json{{"entry", to_json(p.entry)},
                {"start", to_json(p.start)},
                {"reflections", pts},
                {"bounces", p.bounces},
                {"status", to_string(p.status)},
                {"exit", to_json(p.exit)}};
}

Json to_json(const MirrorStage& s) {
    return Json{{"alpha", s.alpha},
                {"k1", s.k1},
                {"k2", s.k2},
                {"rational", s.rational},
                {"alignment", s.alignment},
                {"n2", s.n2},
                {"n1_designed", s.n1_designed},
                {"n1", s.chain.n},
                {"undersized", s.undersized},
                {"range_mirrored", s.chain.range_mirrored},
                {"chains", s.chain.chains.size()},
                {"shadow", s.shadow},
                {"meets_half_eps", s.meets_half_eps},
                {"cover", Json::array({s.cover_lo, s.cover_hi})}};
}

Json to_json(const MirrorPartOne& p) {
    return Json{{"n_rays", p.n_rays},
                {"one_bounce", p.one_bounce},
                {"degenerate", p.degenerate},
                {"failures", p.failures},
                {"max_angle_error", p.max_angle_error},
                {"offset_range", Json::array({p.min_offset, p.max_offset})},
                {"bounce_histogram", p.bounce_histogram}};
}

Json to_json(const MirrorReport& r) {
    Json grid = Json::array();
    for (std::size_t i = 0; i < r.alpha_grid.size(); ++i) {
        Json g{{"alpha", r.alpha_grid[i]}, {"shadow", r.shadows[i]}, {"below_eps", r.shadows[i] < r.eps}};
        if (i < r.covered.size()) g["covered"] = static_cast<bool>(r.covered[i]);
        grid.push_back(g);
    }
    Json stages = Json::array();
    for (const auto& s : r.stages) stages.push_back(to_json(s));
    return Json{{"theta", r.theta},
                {"eps", r.eps},
                {"n_star", r.n_star},
                {"budget", r.budget},
                {"budget_exhausted", r.budget_exhausted},
                {"stages", stages},
                {"composed", r.composed},
                {"part_one", to_json(r.part_one)},
                {"shadows", grid}};
}

}  // namespace specular::cli
