/**
 * @file specular_cli.cpp
 * @brief Command-line surface: build, trace, measure, verify and render scenes.
 *
 * Every subcommand prints a JSON report to stdout (or --out). Exit codes:
 * 0 success, 1 verification failed, 2 usage, parse or I/O error.
 */
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reports.hpp"
#include "specular/block.hpp"
#include "specular/error.hpp"
#include "specular/measure.hpp"
#include "specular/mirror.hpp"
#include "specular/parallel.hpp"
#include "specular/projection.hpp"
#include "specular/scene_io.hpp"
#include "specular/svg.hpp"
#include "specular/tracer.hpp"
#include "specular/urchin.hpp"

namespace {

using namespace specular;
using specular::cli::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
    std::string out;
    int threads{0};
    std::vector<std::string> argv;
};

void emit(const Json& report, const Common& common) {
    const std::string text = report.dump(2) + "\n";
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(common.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::io_error, "cannot open '" + common.out + "' for writing");
    f << text;
}

Json header(const std::string& command, const Common& common) {
    return cli::report_header(command, common.argv);
}

std::string meta_or(const Scene& s, const std::string& key, const std::string& fallback) {
    const std::string v = s.meta(key);
    return v.empty() ? fallback : v;
}

Permutation parse_permutation(const std::string& text) {
    Permutation s;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            s.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::parse_error, "--perm: '" + item + "' is not an integer");
        }
    }
    require(is_permutation(s), "--perm must be a permutation of 1..n");
    return s;
}

/// Rhombus outlines of a mirror scene whose segments are copies of L.
std::vector<Quad> mirror_outlines(const Scene& g, double theta) {
    const Rhombus z = rhombus(theta);
    const Point l0(-1.0 / std::sin(theta), 0.0);
    std::vector<Quad> out;
    out.reserve(g.size());
    for (const auto& s : g.segments) {
        const double dy = s.q.y - s.p.y;
        if (!(std::abs(dy) > 0.0)) continue;
        const double inv_n = dy;
        const Point off = s.p - l0 * inv_n;
        Quad q;
        for (std::size_t i = 0; i < 4; ++i) q[i] = z.vertices[i] * inv_n + off;
        out.push_back(q);
    }
    return out;
}

/// k parallel lines with direction angle `angle` spread across the scene.
std::vector<RayPath> parallel_rays(const Scene& scene, double angle, int k, int cap) {
    std::vector<RayPath> paths;
    if (k <= 0 || scene.empty()) return paths;
    const SceneIndex index(scene);
    const IntervalSet shadow = project_scene(scene, angle + kPi / 2.0);
    const double lo = shadow.intervals().front().lo, hi = shadow.intervals().back().hi;
    const Direction v = Direction::from_angle(angle);
    for (int i = 0; i < k; ++i) {
        const double t = lo + (hi - lo) * (i + 0.5) / k;
        paths.push_back(trace(index, v, unit(angle + kPi / 2.0) * t, cap));
    }
    return paths;
}

Json block_spec_json(const BlockSpec& spec, double grid_step) {
    return Json{{"rho", spec.rho}, {"theta1", spec.theta1}, {"eps", spec.eps}, {"grid_step", grid_step},
                {"max_levels", spec.max_levels}};
}

void add_block_options(CLI::App* cmd, BlockSpec& spec, double& grid_step) {
    cmd->add_option("--rho", spec.rho, "Block size rho")->capture_default_str();
    cmd->add_option("--theta1", spec.theta1, "Range split angle theta1 (radians)")->capture_default_str();
    cmd->add_option("--eps", spec.eps, "Block accuracy eps")->capture_default_str();
    cmd->add_option("--grid-step", grid_step, "Angle grid step (radians)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"specular: mirror constructions, ray tracing and verification"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    common.argv.assign(argv + 1, argv + argc);
    app.add_option("--out", common.out, "Write the JSON report here instead of stdout");
    app.add_option("--threads", common.threads, "Worker threads (default: SPECULAR_THREADS or hardware)");

    // build-block / verify-block
    BlockSpec block_spec;
    double block_grid = 1e-3;
    std::string scene_out, scene_in, svg_out;
    auto* build_block_cmd = app.add_subcommand("build-block", "Search for a block and verify it");
    add_block_options(build_block_cmd, block_spec, block_grid);
    build_block_cmd->add_option("--levels", block_spec.max_levels, "Refinement levels per candidate")
        ->capture_default_str();
    build_block_cmd->add_option("--scene-out", scene_out, "Write the block scene here");

    auto* verify_block_cmd = app.add_subcommand("verify-block", "Verify the block predicates of a scene");
    add_block_options(verify_block_cmd, block_spec, block_grid);
    verify_block_cmd->add_option("--scene", scene_in, "Scene file")->required();

    // build-urchin / verify-urchin
    double urchin_eps = 1.0;
    std::optional<int> urchin_n;
    std::optional<double> urchin_r1, urchin_eps1;
    std::string block_in;
    int urchin_levels = 15;
    auto* build_urchin_cmd = app.add_subcommand("build-urchin", "Assemble the sea-urchin set F");
    build_urchin_cmd->add_option("--eps", urchin_eps, "Target eps in (0, 1]")->capture_default_str();
    build_urchin_cmd->add_option("--n", urchin_n, "Number of spikes N (multiple of 4)");
    build_urchin_cmd->add_option("--r1", urchin_r1, "Inner radius r1");
    build_urchin_cmd->add_option("--eps1", urchin_eps1, "Relaxed block accuracy (raises eps1 to this floor)");
    build_urchin_cmd->add_option("--block", block_in, "Block scene at rho = 1 (default: search)");
    build_urchin_cmd->add_option("--grid-step", block_grid, "Block verification grid step")->capture_default_str();
    build_urchin_cmd->add_option("--levels", urchin_levels, "Block search levels")->capture_default_str();
    build_urchin_cmd->add_option("--scene-out", scene_out, "Write the urchin scene here");

    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    int cap = kDefaultBounceCap;
    std::size_t bundle_samples = 0;
    double min_same = 0.9;
    std::optional<double> verify_eps;
    auto* verify_urchin_cmd = app.add_subcommand("verify-urchin", "Invisibility statistics of an urchin scene");
    verify_urchin_cmd->add_option("--scene", scene_in, "Urchin scene file")->required();
    verify_urchin_cmd->add_option("--eps", verify_eps, "Displacement threshold (default: the urchin's eps)");
    verify_urchin_cmd->add_option("--samples", samples, "Number of sampled lines")->capture_default_str();
    verify_urchin_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    verify_urchin_cmd->add_option("--cap", cap, "Bounce cap")->capture_default_str();
    verify_urchin_cmd->add_option("--bundle-samples", bundle_samples, "Samples for the bundle ledger (0: skip)")
        ->capture_default_str();
    verify_urchin_cmd->add_option("--min-same", min_same, "Required same-direction fraction among hit rays")
        ->capture_default_str();

    // build-mirror / verify-mirror
    double mirror_theta = kPi / 4.0, mirror_eps = 0.5;
    std::vector<double> alphas;
    int alpha_samples = 64;
    std::size_t budget = 1000000, n_rays = 1000;
    std::string perm_text;
    auto* build_mirror_cmd = app.add_subcommand("build-mirror", "Build the invisible mirror G");
    build_mirror_cmd->add_option("--theta", mirror_theta, "Rhombus angle theta in (0, pi)")->capture_default_str();
    build_mirror_cmd->add_option("--eps", mirror_eps, "Shadow target eps")->capture_default_str();
    build_mirror_cmd->add_option("--alpha", alphas, "Target angle alpha (repeatable; default: compact range)");
    build_mirror_cmd->add_option("--samples", alpha_samples, "Compact-range grid size")->capture_default_str();
    build_mirror_cmd->add_option("--budget", budget, "Segment budget for n*")->capture_default_str();
    build_mirror_cmd->add_option("--perm", perm_text, "Use this permutation (e.g. 3,1,2,4) instead of constructing");
    build_mirror_cmd->add_option("--rays", n_rays, "Rays for the part (i) check")->capture_default_str();
    build_mirror_cmd->add_option("--scene-out", scene_out, "Write G here");
    build_mirror_cmd->add_option("--svg", svg_out, "Render Z outlines and G here");

    std::optional<double> verify_theta;
    auto* verify_mirror_cmd = app.add_subcommand("verify-mirror", "Ray and shadow checks of a mirror scene");
    verify_mirror_cmd->add_option("--scene", scene_in, "Mirror scene file")->required();
    verify_mirror_cmd->add_option("--theta", verify_theta, "Rhombus angle (default: from the scene)");
    verify_mirror_cmd->add_option("--eps", mirror_eps, "Shadow target eps")->capture_default_str();
    verify_mirror_cmd->add_option("--alpha", alphas, "Angle alpha to check (repeatable; default: compact range)");
    verify_mirror_cmd->add_option("--samples", alpha_samples, "Compact-range grid size")->capture_default_str();
    verify_mirror_cmd->add_option("--rays", n_rays, "Rays for the part (i) check")->capture_default_str();

    // trace / shadow / render
    double angle = kPi / 2.0, offset = 0.0;
    auto* trace_cmd = app.add_subcommand("trace", "Trace one directed line through a scene");
    trace_cmd->add_option("--scene", scene_in, "Scene file")->required();
    trace_cmd->add_option("--angle", angle, "Direction angle of v (radians)")->capture_default_str();
    trace_cmd->add_option("--offset", offset, "w = offset * e^{i(angle + pi/2)}")->capture_default_str();
    trace_cmd->add_option("--cap", cap, "Bounce cap")->capture_default_str();
    trace_cmd->add_option("--svg", svg_out, "Render the scene and the path here");

    std::vector<double> shadow_alphas;
    auto* shadow_cmd = app.add_subcommand("shadow", "Projection measure of a scene onto K_alpha");
    shadow_cmd->add_option("--scene", scene_in, "Scene file")->required();
    shadow_cmd->add_option("--alpha", shadow_alphas, "Projection angle (repeatable, radians)")->required();

    bool mirror_mode = false;
    int render_rays = 0;
    auto* render_cmd = app.add_subcommand("render", "Render a scene as SVG");
    render_cmd->add_option("--scene", scene_in, "Scene file")->required();
    render_cmd->add_option("--svg", svg_out, "SVG output path")->required();
    render_cmd->add_flag("--mirror-mode", mirror_mode, "Dotted mirrors with bold rhombus outlines");
    render_cmd->add_option("--theta", verify_theta, "Rhombus angle for --mirror-mode (default: from the scene)");
    render_cmd->add_option("--rays", render_rays, "Overlay this many parallel rays")->capture_default_str();
    render_cmd->add_option("--angle", angle, "Direction angle of the overlay rays")->capture_default_str();
    render_cmd->add_option("--cap", cap, "Bounce cap")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (common.threads > 0) set_thread_count(common.threads);
        const int threads = default_thread_count();

        if (*build_block_cmd) {
            const BlockSearchResult res = search_block(block_spec, block_grid, threads);
            Json j = header("build-block", common);
            j["parameters"] = block_spec_json(block_spec, block_grid);
            j["accepted"] = res.accepted;
            if (!res.accepted) j["error"] = to_string(ErrorCode::budget_exhausted);
            j["report"] = cli::to_json(res.report);
            Json steps = Json::array();
            for (const auto& s : res.steps) steps.push_back(cli::to_json(s));
            j["search"] = steps;
            if (!scene_out.empty()) {
                Scene sc = res.scene;
                sc.set_meta("kind", "block");
                sc.set_meta("block.rho", format_double(block_spec.rho));
                sc.set_meta("block.theta1", format_double(block_spec.theta1));
                sc.set_meta("block.eps", format_double(block_spec.eps));
                sc.set_meta("block.accepted", res.accepted ? "true" : "false");
                write_scene(sc, scene_out);
                j["scene"] = scene_out;
            }
            emit(j, common);
            return res.accepted ? kExitOk : kExitFailed;
        }

        if (*verify_block_cmd) {
            const Scene sc = read_scene(std::filesystem::path(scene_in));
            const BlockReport r = verify_block(sc, block_spec, block_grid, threads);
            Json j = header("verify-block", common);
            j["parameters"] = block_spec_json(block_spec, block_grid);
            j["scene"] = scene_in;
            j["accepted"] = r.accepted;
            j["report"] = cli::to_json(r);
            emit(j, common);
            return r.accepted ? kExitOk : kExitFailed;
        }

        if (*build_urchin_cmd) {
            UrchinOverrides ov;
            ov.n = urchin_n;
            ov.r1 = urchin_r1;
            ov.eps1_floor = urchin_eps1;
            const UrchinParams p = solve_parameters(urchin_eps, ov);
            const BlockSpec spec{1.0, p.theta1(), p.eps1, urchin_levels};
            Json j = header("build-urchin", common);
            j["parameters"] = cli::to_json(p);
            j["block_spec"] = block_spec_json(spec, block_grid);
            Scene block;
            BlockReport br;
            if (!block_in.empty()) {
                block = read_scene(std::filesystem::path(block_in));
                br = verify_block(block, spec, block_grid, threads);
            } else {
                const BlockSearchResult res = search_block(spec, block_grid, threads);
                block = res.scene;
                br = res.report;
            }
            j["block_report"] = cli::to_json(br);
            if (!br.accepted) {
                j["accepted"] = false;
                j["error"] = to_string(ErrorCode::budget_exhausted);
                emit(j, common);
                return kExitFailed;
            }
            UrchinScene u = build_urchin(p, scaled(block, p.rho));
            annotate_urchin(u, p);
            j["accepted"] = true;
            j["j_star"] = u.j_star;
            j["block_segments"] = u.block_count;
            j["segment_count"] = u.scene.size();
            if (!scene_out.empty()) {
                write_scene(u.scene, scene_out);
                j["scene"] = scene_out;
            }
            emit(j, common);
            return kExitOk;
        }

        if (*verify_urchin_cmd) {
            Scene sc = read_scene(std::filesystem::path(scene_in));
            const UrchinParams p = urchin_params_from_metadata(sc);
            const UrchinScene u = urchin_from_scene(std::move(sc), p);
            const double eps = verify_eps.value_or(p.eps);
            const Theorem1Report r = theorem1_report(u, p, eps, samples, seed, threads, cap, bundle_samples);
            Json j = header("verify-urchin", common);
            j["scene"] = scene_in;
            j["parameters"] = cli::to_json(p);
            j["seed"] = seed;
            j["min_same_direction"] = min_same;
            j["report"] = cli::to_json(r);
            const bool ok = r.same_direction_fraction >= min_same;
            j["accepted"] = ok;
            emit(j, common);
            return ok ? kExitOk : kExitFailed;
        }

        if (*build_mirror_cmd) {
            Json j = header("build-mirror", common);
            j["parameters"] = Json{{"theta", mirror_theta}, {"eps", mirror_eps}, {"budget", budget},
                                   {"alpha_samples", alpha_samples}, {"rays", n_rays}};
            const std::vector<double> grid =
                alphas.empty() ? compact_alpha_range(mirror_theta, mirror_eps, alpha_samples) : alphas;
            Scene g;
            MirrorReport rep;
            bool ok = true;
            if (!perm_text.empty()) {
                const Permutation s = parse_permutation(perm_text);
                g.segments = apply_map(s, {diagonal_L(mirror_theta)}, mirror_theta);
                rep = verify_mirror(g, mirror_theta, mirror_eps, n_rays, grid, threads);
                rep.n_star = static_cast<int>(s.size());
                j["permutation"] = s;
            } else {
                AlphaSpec spec;
                spec.explicit_alphas = alphas;
                spec.range_samples = alpha_samples;
                InvisibleMirror m = build_invisible_mirror(mirror_theta, mirror_eps, spec, budget, threads);
                g = std::move(m.g);
                rep = std::move(m.report);
                if (rep.part_one.n_rays != n_rays) {
                    const MirrorReport again = verify_mirror(g, mirror_theta, mirror_eps, n_rays, grid, threads);
                    rep.part_one = again.part_one;
                }
                ok = !rep.budget_exhausted;
            }
            ok = ok && rep.part_one.failures == 0;
            g.set_meta("kind", "mirror");
            g.set_meta("mirror.theta", format_double(mirror_theta));
            g.set_meta("mirror.n_star", std::to_string(rep.n_star));
            j["report"] = cli::to_json(rep);
            j["segment_count"] = g.size();
            j["accepted"] = ok;
            if (!scene_out.empty()) {
                write_scene(g, scene_out);
                j["scene"] = scene_out;
            }
            if (!svg_out.empty()) {
                SvgOptions opt;
                opt.mirror_mode = true;
                opt.outlines = mirror_outlines(g, mirror_theta);
                write_svg(svg_out, g, {}, opt);
                j["svg"] = svg_out;
            }
            emit(j, common);
            return ok ? kExitOk : kExitFailed;
        }

        if (*verify_mirror_cmd) {
            const Scene g = read_scene(std::filesystem::path(scene_in));
            const double theta = verify_theta.value_or(std::stod(meta_or(g, "mirror.theta", "0.78539816339744828")));
            const std::vector<double> grid =
                alphas.empty() ? compact_alpha_range(theta, mirror_eps, alpha_samples) : alphas;
            const MirrorReport rep = verify_mirror(g, theta, mirror_eps, n_rays, grid, threads);
            bool shadows_ok = true;
            for (double s : rep.shadows) shadows_ok = shadows_ok && s < mirror_eps;
            const bool ok = rep.part_one.failures == 0 && shadows_ok;
            Json j = header("verify-mirror", common);
            j["scene"] = scene_in;
            j["parameters"] = Json{{"theta", theta}, {"eps", mirror_eps}, {"alpha_samples", alpha_samples},
                                   {"rays", n_rays}};
            j["report"] = cli::to_json(rep);
            j["shadows_below_eps"] = shadows_ok;
            j["accepted"] = ok;
            emit(j, common);
            return ok ? kExitOk : kExitFailed;
        }

        if (*trace_cmd) {
            const Scene sc = read_scene(std::filesystem::path(scene_in));
            const Direction v = Direction::from_angle(angle);
            const RayPath path = trace(sc, v, unit(angle + kPi / 2.0) * offset, cap);
            Json j = header("trace", common);
            j["scene"] = scene_in;
            j["parameters"] = Json{{"angle", angle}, {"offset", offset}, {"cap", cap}};
            j["path"] = cli::to_json(path);
            if (!svg_out.empty()) {
                write_svg(svg_out, sc, {path});
                j["svg"] = svg_out;
            }
            emit(j, common);
            return kExitOk;
        }

        if (*shadow_cmd) {
            const Scene sc = read_scene(std::filesystem::path(scene_in));
            Json list = Json::array();
            for (double a : shadow_alphas) {
                const IntervalSet s = project_scene(sc, a);
                list.push_back(Json{{"alpha", a}, {"measure", s.measure()}, {"intervals", cli::to_json(s)}});
            }
            Json j = header("shadow", common);
            j["scene"] = scene_in;
            j["shadows"] = list;
            emit(j, common);
            return kExitOk;
        }

        if (*render_cmd) {
            const Scene sc = read_scene(std::filesystem::path(scene_in));
            SvgOptions opt;
            opt.mirror_mode = mirror_mode;
            if (mirror_mode) {
                const double theta =
                    verify_theta.value_or(std::stod(meta_or(sc, "mirror.theta", "0.78539816339744828")));
                opt.outlines = mirror_outlines(sc, theta);
            }
            const std::vector<RayPath> rays = parallel_rays(sc, angle, render_rays, cap);
            write_svg(svg_out, sc, rays, opt);
            Json j = header("render", common);
            j["scene"] = scene_in;
            j["svg"] = svg_out;
            j["elements"] = Json{{"mirrors", sc.size()}, {"outlines", opt.outlines.size()}, {"rays", rays.size()}};
            emit(j, common);
            return kExitOk;
        }
    } catch (const Error& e) {
        Json j = header(app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name(), common);
        j["error"] = to_string(e.code());
        j["message"] = e.what();
        std::cout << j.dump(2) << "\n";
        const bool usage = e.code() == ErrorCode::precondition || e.code() == ErrorCode::parse_error ||
                           e.code() == ErrorCode::version_mismatch || e.code() == ErrorCode::io_error;
        return usage ? kExitUsage : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
