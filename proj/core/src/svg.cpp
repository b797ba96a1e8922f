/**
 * @file svg.cpp
 * @brief SVG writer with fixed-precision, locale-independent number output.
 */
#include "specular/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "specular/error.hpp"

namespace specular {

namespace {

std::string fixed(double x) {
    if (std::abs(x) < 5e-7) x = 0.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Extent {
    double x0{std::numeric_limits<double>::infinity()}, y0{x0};
    double x1{-x0}, y1{-x0};
    void add(Point p) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    bool empty() const { return x1 < x0; }
};

/// SVG y axis points down: emit (x, -y).
std::string pt(Point p) { return fixed(p.x) + "," + fixed(-p.y); }

}  // namespace

std::string render_svg(const Scene& scene, const std::vector<RayPath>& paths, const SvgOptions& options) {
    Extent ext;
    for (const auto& s : scene.segments) {
        ext.add(s.p);
        ext.add(s.q);
    }
    for (const auto& q : options.outlines) {
        for (const auto& p : q) ext.add(p);
    }
    for (const auto& path : paths) {
        ext.add(path.start);
        for (const auto& p : path.reflections) ext.add(p);
    }
    if (ext.empty()) {
        ext.add(Point(0.0, 0.0));
        ext.add(Point(1.0, 1.0));
    }
    double w = ext.x1 - ext.x0, h = ext.y1 - ext.y0;
    const double pad = 0.05 * std::max({w, h, 1e-9});
    // Rays leave the picture along their exit direction.
    const double tail = std::max(w, h) * 0.25 + pad;
    ext.x0 -= pad;
    ext.y0 -= pad;
    ext.x1 += pad;
    ext.y1 += pad;
    w = ext.x1 - ext.x0;
    h = ext.y1 - ext.y0;
    const int width = std::max(1, options.width_px);
    const int height = std::max(1, static_cast<int>(std::lround(width * h / w)));

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
           std::to_string(height) + "\" viewBox=\"" + fixed(ext.x0) + " " + fixed(-ext.y1) + " " + fixed(w) + " " +
           fixed(h) + "\">\n";
    if (!options.title.empty()) out += "<title>" + escape(options.title) + "</title>\n";
    out += "<rect x=\"" + fixed(ext.x0) + "\" y=\"" + fixed(-ext.y1) + "\" width=\"" + fixed(w) + "\" height=\"" +
           fixed(h) + "\" fill=\"white\"/>\n";

    out += "<g id=\"outlines\" fill=\"none\" stroke=\"black\" stroke-width=\"2.5\" vector-effect=\"non-scaling-stroke\">\n";
    for (const auto& q : options.outlines) {
        out += "<polygon vector-effect=\"non-scaling-stroke\" points=\"";
        for (std::size_t i = 0; i < q.size(); ++i) out += (i ? " " : "") + pt(q[i]);
        out += "\"/>\n";
    }
    out += "</g>\n";

    out += std::string("<g id=\"mirrors\" stroke=\"black\" stroke-width=\"1\"") +
           (options.mirror_mode ? " stroke-dasharray=\"2,2\"" : "") + ">\n";
    for (const auto& s : scene.segments) {
        out += "<line vector-effect=\"non-scaling-stroke\" x1=\"" + fixed(s.p.x) + "\" y1=\"" + fixed(-s.p.y) +
               "\" x2=\"" + fixed(s.q.x) + "\" y2=\"" + fixed(-s.q.y) + "\"/>\n";
    }
    out += "</g>\n";

    out += "<g id=\"rays\" fill=\"none\" stroke=\"red\" stroke-width=\"1\">\n";
    for (const auto& path : paths) {
        Point last = path.reflections.empty() ? path.start : path.reflections.back();
        out += "<polyline vector-effect=\"non-scaling-stroke\" points=\"" + pt(path.start);
        for (const auto& p : path.reflections) out += " " + pt(p);
        if (!path.degenerate()) out += " " + pt(last + path.exit.v.vec() * tail);
        out += "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

void write_svg(const std::filesystem::path& path, const Scene& scene, const std::vector<RayPath>& paths,
               const SvgOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
    out << render_svg(scene, paths, options);
    if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

}  // namespace specular
