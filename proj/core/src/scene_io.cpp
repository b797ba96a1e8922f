/**
 * @file scene_io.cpp
 * @brief Plain-text scene reader and writer.
 */
#include "specular/scene_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "specular/error.hpp"

namespace specular {

namespace {

std::string sanitize(std::string s, bool is_key) {
    for (char& c : s) {
        if (c == '\n' || c == '\r' || (is_key && (c == ' ' || c == '\t'))) c = is_key ? '_' : ' ';
    }
    return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw Error(ErrorCode::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

double parse_number(std::string_view tok, std::size_t line_no) {
    double x = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
        parse_fail(line_no, "invalid number '" + std::string(tok) + "'");
    }
    return x;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_scene(const Scene& scene, std::ostream& out) {
    out << kSceneHeader << '\n';
    for (const auto& [k, v] : scene.metadata) out << "# " << sanitize(k, true) << ' ' << sanitize(v, false) << '\n';
    for (const auto& s : scene.segments) {
        out << "segment " << format_double(s.p.x) << ' ' << format_double(s.p.y) << ' ' << format_double(s.q.x) << ' '
            << format_double(s.q.y) << '\n';
    }
}

Scene read_scene(std::istream& in) {
    Scene scene;
    std::string raw;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (!header) {
            if (line == kSceneHeader) {
                header = true;
                continue;
            }
            const auto toks = split_ws(line);
            if (toks.size() == 2 && toks[0] == "specular-scene") {
                throw Error(ErrorCode::version_mismatch,
                            "line 1: unsupported scene version '" + std::string(toks[1]) + "'");
            }
            parse_fail(line_no, "missing header '" + std::string(kSceneHeader) + "'");
        }
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string_view body = trim(line.substr(1));
            const std::size_t sp = body.find_first_of(" \t");
            if (body.empty()) continue;
            const std::string key(body.substr(0, sp));
            const std::string value = sp == std::string_view::npos ? std::string() : std::string(trim(body.substr(sp)));
            scene.metadata.emplace_back(key, value);
            continue;
        }
        const auto toks = split_ws(line);
        if (toks[0] != "segment") parse_fail(line_no, "unknown record '" + std::string(toks[0]) + "'");
        if (toks.size() != 5) parse_fail(line_no, "segment needs 4 numbers");
        scene.segments.push_back(Segment{Point(parse_number(toks[1], line_no), parse_number(toks[2], line_no)),
                                         Point(parse_number(toks[3], line_no), parse_number(toks[4], line_no))});
    }
    if (!header) parse_fail(line_no == 0 ? 1 : line_no, "empty input");
    return scene;
}

std::string write_scene_string(const Scene& scene) {
    std::ostringstream out;
    write_scene(scene, out);
    return out.str();
}

Scene read_scene_string(const std::string& text) {
    std::istringstream in(text);
    return read_scene(in);
}

void write_scene(const Scene& scene, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
    write_scene(scene, out);
    if (!out) throw Error(ErrorCode::io_error, "write failed for '" + path.string() + "'");
}

Scene read_scene(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path.string() + "'");
    return read_scene(in);
}

}  // namespace specular
