#include "reebstrip/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace reebstrip {

namespace {

struct GComp {
    int first = 0, last = 0;      // s-lattice index range
    int level = 0;
    int down_count = 0, up_count = 0;
    int down_one = -1, up_one = -1;  // unique partners when counts are 1
    bool singular() const { return down_count != 1 || up_count != 1; }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

ReebGraph grid_reeb(const StripRegion& region, std::optional<Window> heights, int n_t, int n_s) {
    n_t = std::max(n_t, 256);
    n_s = std::max(n_s, 1024);

    const Window& w = region.window;
    std::vector<double> xs(n_s), v1(n_s), v2(n_s);
    for (int i = 0; i < n_s; ++i) {
        xs[i] = w.lo + w.length() * i / (n_s - 1);
        v1[i] = region.c1.value(xs[i]);
        v2[i] = region.c2.value(xs[i]);
    }
    double nat_lo = std::numeric_limits<double>::infinity(), nat_hi = -nat_lo;
    for (int i = 0; i < n_s; ++i) {
        if (std::isfinite(v1[i])) nat_lo = std::min(nat_lo, v1[i]);
        if (std::isfinite(v2[i])) nat_hi = std::max(nat_hi, v2[i]);
    }

    // pad past the natural extremes (extreme levels are then empty) unless a
    // requested bound truncates the strip
    const double pad = 2.0 * (nat_hi - nat_lo) / n_t + 1e-12;
    double h_lo = nat_lo - pad, h_hi = nat_hi + pad;
    bool trunc_bottom = false, trunc_top = false;
    if (heights) {
        if (heights->lo > nat_lo) {
            h_lo = heights->lo;
            trunc_bottom = true;
        }
        if (heights->hi < nat_hi) {
            h_hi = heights->hi;
            trunc_top = true;
        }
    }

    ReebGraph g;
    g.window = w;
    g.heights = {h_lo, h_hi};
    if (h_lo >= h_hi) return g;

    const double dt = (h_hi - h_lo) / (n_t - 1);

    // per-level components
    std::vector<std::vector<GComp>> levels(static_cast<size_t>(n_t));
    std::vector<int> offset(static_cast<size_t>(n_t) + 1, 0);
    for (int k = 0; k < n_t; ++k) {
        const double t = h_lo + dt * k;
        auto& row = levels[static_cast<size_t>(k)];
        int i = 0;
        while (i < n_s) {
            if (!(v1[i] <= t && t <= v2[i])) {
                ++i;
                continue;
            }
            int j = i;
            while (j + 1 < n_s && v1[j + 1] <= t && t <= v2[j + 1]) ++j;
            GComp c;
            c.first = i;
            c.last = j;
            c.level = k;
            row.push_back(c);
            i = j + 1;
        }
        offset[static_cast<size_t>(k) + 1] = offset[static_cast<size_t>(k)] +
                                             static_cast<int>(row.size());
    }
    const int total = offset[static_cast<size_t>(n_t)];
    auto flat = [&](int k, int idx) { return offset[static_cast<size_t>(k)] + idx; };

    // adjacency: index-range overlap between consecutive levels
    std::vector<std::pair<int, int>> links;
    for (int k = 0; k + 1 < n_t; ++k) {
        const auto& lo = levels[static_cast<size_t>(k)];
        const auto& hi = levels[static_cast<size_t>(k) + 1];
        size_t a = 0, b = 0;
        while (a < lo.size() && b < hi.size()) {
            if (lo[a].last < hi[b].first) {
                ++a;
            } else if (hi[b].last < lo[a].first) {
                ++b;
            } else {
                links.emplace_back(flat(k, static_cast<int>(a)), flat(k + 1, static_cast<int>(b)));
                if (lo[a].last <= hi[b].last)
                    ++a;
                else
                    ++b;
            }
        }
    }

    std::vector<GComp*> comp(static_cast<size_t>(total));
    for (int k = 0; k < n_t; ++k)
        for (size_t i = 0; i < levels[static_cast<size_t>(k)].size(); ++i)
            comp[static_cast<size_t>(flat(k, static_cast<int>(i)))] =
                &levels[static_cast<size_t>(k)][i];
    for (const auto& [a, b] : links) {
        comp[static_cast<size_t>(a)]->up_count++;
        comp[static_cast<size_t>(a)]->up_one = b;
        comp[static_cast<size_t>(b)]->down_count++;
        comp[static_cast<size_t>(b)]->down_one = a;
    }

    // vertex clusters: linked singular components merge
    UnionFind uf(static_cast<size_t>(total));
    for (const auto& [a, b] : links)
        if (comp[static_cast<size_t>(a)]->singular() && comp[static_cast<size_t>(b)]->singular())
            uf.unite(a, b);

    struct Cluster {
        int id = -1;
        double h_sum = 0.0;
        int h_n = 0;
        double fp_lo = std::numeric_limits<double>::infinity();
        double fp_hi = -std::numeric_limits<double>::infinity();
        bool clipped = false;
        bool at_trunc_bound = false;
    };
    std::vector<Cluster> clusters(static_cast<size_t>(total));
    for (int c = 0; c < total; ++c) {
        if (!comp[static_cast<size_t>(c)]->singular()) continue;
        const int root = uf.find(c);
        auto& cl = clusters[static_cast<size_t>(root)];
        const GComp& gc = *comp[static_cast<size_t>(c)];
        cl.h_sum += h_lo + dt * gc.level;
        cl.h_n++;
        cl.fp_lo = std::min(cl.fp_lo, xs[static_cast<size_t>(gc.first)]);
        cl.fp_hi = std::max(cl.fp_hi, xs[static_cast<size_t>(gc.last)]);
        if (gc.first == 0 || gc.last == n_s - 1) cl.clipped = true;
        if ((gc.level == 0 && trunc_bottom) || (gc.level == n_t - 1 && trunc_top))
            cl.at_trunc_bound = true;
    }
    for (int c = 0; c < total; ++c) {
        auto& cl = clusters[static_cast<size_t>(c)];
        if (cl.h_n == 0) continue;
        ReebVertex v;
        v.id = static_cast<int>(g.vertices.size());
        v.height = cl.h_sum / cl.h_n;
        v.kind = (cl.clipped || cl.at_trunc_bound) ? VertexKind::cut : VertexKind::critical;
        v.footprint_lo = cl.fp_lo;
        v.footprint_hi = cl.fp_hi;
        v.truncated = cl.clipped;
        cl.id = v.id;
        g.vertices.push_back(v);
    }

    // edges: maximal chains of regular components between two clusters
    for (int c = 0; c < total; ++c) {
        const GComp& gc = *comp[static_cast<size_t>(c)];
        if (gc.singular()) continue;
        const GComp& below = *comp[static_cast<size_t>(gc.down_one)];
        if (!below.singular()) continue;  // chain continues further down
        const int bottom = clusters[static_cast<size_t>(uf.find(gc.down_one))].id;
        int cur = c;
        while (!comp[static_cast<size_t>(comp[static_cast<size_t>(cur)]->up_one)]->singular())
            cur = comp[static_cast<size_t>(cur)]->up_one;
        const int top = clusters[static_cast<size_t>(uf.find(comp[static_cast<size_t>(cur)]->up_one))].id;
        g.edges.push_back({bottom, top});
    }

    for (auto& v : g.vertices) v.degree = 0;
    for (auto& e : g.edges) {
        if (g.vertex(e.lo).height > g.vertex(e.hi).height) std::swap(e.lo, e.hi);
        ++g.vertices[static_cast<size_t>(e.lo)].degree;
        ++g.vertices[static_cast<size_t>(e.hi)].degree;
    }
    return g;
}

// ------------------------------------------------------------- equivalence

namespace {

struct Matcher {
    const ReebGraph& g1;
    const ReebGraph& g2;
    double tol_h;
    double fp_slack;
    std::vector<int> order;    // g1 vertex ids sorted by height
    std::vector<int> match12;  // g1 id -> g2 id
    std::vector<char> used2;

    bool compatible(const ReebVertex& a, const ReebVertex& b) const {
        if (a.kind != b.kind || a.degree != b.degree) return false;
        if (std::abs(a.height - b.height) > tol_h) return false;
        return a.footprint_lo - fp_slack <= b.footprint_hi + fp_slack &&
               b.footprint_lo - fp_slack <= a.footprint_hi + fp_slack;
    }

    bool edges_match() const {
        auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
        std::vector<std::pair<int, int>> e1, e2;
        for (const auto& e : g1.edges) e1.push_back(key(match12[static_cast<size_t>(e.lo)],
                                                        match12[static_cast<size_t>(e.hi)]));
        for (const auto& e : g2.edges) e2.push_back(key(e.lo, e.hi));
        std::sort(e1.begin(), e1.end());
        std::sort(e2.begin(), e2.end());
        return e1 == e2;
    }

    bool assign(size_t pos) {
        if (pos == order.size()) return edges_match();
        const auto& v = g1.vertex(order[pos]);
        for (const auto& cand : g2.vertices) {
            if (used2[static_cast<size_t>(cand.id)] || !compatible(v, cand)) continue;
            match12[static_cast<size_t>(v.id)] = cand.id;
            used2[static_cast<size_t>(cand.id)] = 1;
            if (assign(pos + 1)) return true;
            used2[static_cast<size_t>(cand.id)] = 0;
        }
        return false;
    }
};

}  // namespace

EquivalenceResult graphs_equivalent(const ReebGraph& g1, const ReebGraph& g2, double tol_h) {
    EquivalenceResult res;
    if (g1.vertices.size() != g2.vertices.size() || g1.edges.size() != g2.edges.size()) {
        res.certificate = "size mismatch: " + std::to_string(g1.vertices.size()) + "v/" +
                          std::to_string(g1.edges.size()) + "e vs " +
                          std::to_string(g2.vertices.size()) + "v/" +
                          std::to_string(g2.edges.size()) + "e";
        return res;
    }
    Matcher m{g1, g2, tol_h, 2e-3 * g1.window.length(), {}, {}, {}};
    m.order.resize(g1.vertices.size());
    std::iota(m.order.begin(), m.order.end(), 0);
    std::sort(m.order.begin(), m.order.end(), [&](int a, int b) {
        return std::make_pair(g1.vertex(a).height, g1.vertex(a).footprint_lo) <
               std::make_pair(g1.vertex(b).height, g1.vertex(b).footprint_lo);
    });
    m.match12.assign(g1.vertices.size(), -1);
    m.used2.assign(g2.vertices.size(), 0);
    if (m.assign(0)) {
        res.equivalent = true;
        std::string cert;
        for (size_t i = 0; i < m.match12.size(); ++i)
            cert += std::to_string(i) + "->" + std::to_string(m.match12[i]) + " ";
        res.certificate = cert;
    } else {
        res.certificate = "no height/footprint-respecting bijection extends to the edges";
    }
    return res;
}

}  // namespace reebstrip
