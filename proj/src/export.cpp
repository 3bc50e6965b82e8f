#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include "reebstrip/reeb.hpp"

namespace reebstrip {

namespace {

const char* kind_name(VertexKind k) {
    switch (k) {
        case VertexKind::critical: return "critical";
        case VertexKind::cut: return "cut";
        case VertexKind::end: return "end";
    }
    return "?";
}

std::string fnum(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

nlohmann::json to_json(const ReebGraph& g) {
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : g.vertices)
        vs.push_back({{"id", v.id},
                      {"height", v.height},
                      {"kind", kind_name(v.kind)},
                      {"degree", v.degree},
                      {"footprint", {v.footprint_lo, v.footprint_hi}},
                      {"truncated", v.truncated}});
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : g.edges) es.push_back({{"lo", e.lo}, {"hi", e.hi}});
    return {{"vertices", std::move(vs)},
            {"edges", std::move(es)},
            {"window", {{"s", {g.window.lo, g.window.hi}}, {"heights", {g.heights.lo, g.heights.hi}}}},
            {"warnings", g.warnings}};
}

std::string to_dot(const ReebGraph& g) {
    std::string out = "digraph reeb {\n  rankdir=BT;\n";
    for (const auto& v : g.vertices) {
        out += "  v" + std::to_string(v.id) + " [label=\"" + std::to_string(v.id) + "\\nh=" +
               fnum(v.height) + "\" kind=" + kind_name(v.kind) + " height=" + fnum(v.height);
        if (v.kind == VertexKind::cut) out += " shape=box";
        out += "];\n";
    }
    // group vertices of equal height on one rank
    std::map<double, std::vector<int>> by_height;
    for (const auto& v : g.vertices) by_height[v.height].push_back(v.id);
    for (const auto& [h, ids] : by_height) {
        if (ids.size() < 2) continue;
        out += "  { rank=same;";
        for (int id : ids) out += " v" + std::to_string(id) + ";";
        out += " }\n";
    }
    for (const auto& e : g.edges)
        out += "  v" + std::to_string(e.lo) + " -> v" + std::to_string(e.hi) + ";\n";
    out += "}\n";
    return out;
}

std::string to_svg(const ReebGraph& g, const StripRegion& region) {
    const double W = 800.0, H = 600.0, m = 50.0;
    const double s_lo = region.window.lo, s_hi = region.window.hi;
    double h_lo = g.heights.lo, h_hi = g.heights.hi;
    if (!(h_hi > h_lo)) {
        h_lo -= 1.0;
        h_hi += 1.0;
    }
    auto X = [&](double s) { return m + (s - s_lo) / (s_hi - s_lo) * (W - 2 * m); };
    auto Y = [&](double h) { return H - m - (h - h_lo) / (h_hi - h_lo) * (H - 2 * m); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fnum(W) +
                      "\" height=\"" + fnum(H) + "\" viewBox=\"0 0 " + fnum(W) + " " + fnum(H) +
                      "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // boundary curves: s runs horizontally, function value vertically
    auto curve = [&](const TSFunction& f, const char* color) {
        std::string pts;
        const int n = 512;
        for (int i = 0; i < n; ++i) {
            const double s = s_lo + (s_hi - s_lo) * i / (n - 1);
            double v;
            try {
                v = f.value(s);
            } catch (const EvalError&) {
                continue;
            }
            if (!std::isfinite(v)) continue;
            v = std::clamp(v, h_lo, h_hi);
            pts += fnum(X(s)) + "," + fnum(Y(v)) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1\" points=\"" + pts + "\"/>\n";
    };
    curve(region.c1, "#2166ac");
    curve(region.c2, "#b2182b");

    for (const auto& e : g.edges) {
        const auto& a = g.vertex(e.lo);
        const auto& b = g.vertex(e.hi);
        svg += "<line x1=\"" + fnum(X(0.5 * (a.footprint_lo + a.footprint_hi))) + "\" y1=\"" +
               fnum(Y(a.height)) + "\" x2=\"" + fnum(X(0.5 * (b.footprint_lo + b.footprint_hi))) +
               "\" y2=\"" + fnum(Y(b.height)) + "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& v : g.vertices) {
        const char* fill = v.kind == VertexKind::critical ? "#1a9850" : "#888888";
        svg += "<circle cx=\"" + fnum(X(0.5 * (v.footprint_lo + v.footprint_hi))) + "\" cy=\"" +
               fnum(Y(v.height)) + "\" r=\"4\" fill=\"" + std::string(fill) + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace reebstrip
