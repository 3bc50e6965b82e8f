#include <algorithm>
#include <cmath>
#include <limits>

#include "reebstrip/reeb.hpp"

namespace reebstrip {

int ReebGraph::non_cut_count() const {
    int n = 0;
    for (const auto& v : vertices)
        if (v.kind == VertexKind::critical) ++n;
    return n;
}

namespace {

struct CritRef {
    double value = 0.0;
    double lo = 0.0, hi = 0.0;  // locus
    int fn = 0;                 // 1 or 2
};

struct EventGroup {
    double height = 0.0;
    std::vector<CritRef> crits;
    bool is_bound = false;
};

// index of the interval with the largest closed overlap, or -1
int best_overlap(const SliceInterval& c, const std::vector<SliceInterval>& ivs, double slack) {
    int best = -1;
    double best_len = -1.0;
    for (size_t i = 0; i < ivs.size(); ++i) {
        const double lo = std::max(c.lo - slack, ivs[i].lo - slack);
        const double hi = std::min(c.hi + slack, ivs[i].hi + slack);
        if (hi >= lo && hi - lo > best_len) {
            best_len = hi - lo;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

ReebGraph build_reeb_graph(const StripRegion& region, const ReebOptions& opts) {
    const Tolerances& tol = opts.tol;
    ReebGraph g;
    g.window = region.window;

    const auto cs1 = region.c1.critical_set(region.window, tol);
    const auto cs2 = region.c2.critical_set(region.window, tol);

    const double nat_lo = region.height_min();
    const double nat_hi = region.height_max();

    // The sweep range is padded past the natural strip extremes so that the
    // extreme critical events stay interior; slices beyond them are empty.
    // A user bound strictly inside the natural range truncates instead and
    // produces cut vertices at that height.
    const double pad = 1e-3 * (nat_hi - nat_lo) + 1e-9;
    double h_lo = nat_lo - pad, h_hi = nat_hi + pad;
    if (opts.heights) {
        if (opts.heights->lo > nat_lo) h_lo = opts.heights->lo;
        if (opts.heights->hi < nat_hi) h_hi = opts.heights->hi;
        if (h_lo >= h_hi) {
            g.heights = {h_lo, h_hi};
            g.warnings.push_back("height window misses the strip; graph is empty");
            return g;
        }
    }
    g.heights = {h_lo, h_hi};

    // ---- events: critical values, window-side contact heights, sweep bounds
    struct RawEvent {
        double h;
        std::vector<CritRef> crits;
    };
    std::vector<RawEvent> raw;
    auto add_crit = [&](const CriticalItem& it, int fn) {
        if (it.value <= h_lo || it.value >= h_hi) return;
        raw.push_back({it.value, {CritRef{it.value, it.locus_lo, it.locus_hi, fn}}});
    };
    for (const auto& it : cs1->items) add_crit(it, 1);
    for (const auto& it : cs2->items) add_crit(it, 2);
    for (double contact : {region.c1.value(region.window.lo), region.c1.value(region.window.hi),
                           region.c2.value(region.window.lo), region.c2.value(region.window.hi)})
        if (contact > h_lo && contact < h_hi) raw.push_back({contact, {}});
    raw.push_back({h_lo, {}});
    raw.push_back({h_hi, {}});
    std::sort(raw.begin(), raw.end(), [](const RawEvent& a, const RawEvent& b) { return a.h < b.h; });

    std::vector<EventGroup> events;
    for (auto& re : raw) {
        if (!events.empty() && re.h - events.back().height <= opts.event_gap) {
            auto& ev = events.back();
            if (re.h - ev.height > 1e-12)
                g.warnings.push_back("degenerate event: distinct heights " +
                                     std::to_string(ev.height) + " and " + std::to_string(re.h) +
                                     " merged (within event_gap)");
            for (auto& c : re.crits) ev.crits.push_back(c);
            continue;
        }
        EventGroup ev;
        ev.height = re.h;
        ev.crits = std::move(re.crits);
        events.push_back(std::move(ev));
    }
    events.front().is_bound = true;
    events.back().is_bound = true;

    // ---- bands with three probe slices; the outer probes are the approach
    // slices used for matching across the neighbouring events
    struct Band {
        std::vector<SliceInterval> lo_comps, mid_comps, hi_comps;
    };
    const double approach = 1e-6;
    std::vector<Band> bands(events.size() - 1);
    for (size_t b = 0; b + 1 < events.size(); ++b) {
        const double lo = events[b].height, hi = events[b + 1].height;
        const double span = hi - lo;
        Band& band = bands[b];
        band.lo_comps = slice(region, lo + approach * span).intervals;
        band.mid_comps = slice(region, lo + 0.5 * span).intervals;
        band.hi_comps = slice(region, lo + (1.0 - approach) * span).intervals;
        if (band.lo_comps.size() != band.mid_comps.size() ||
            band.mid_comps.size() != band.hi_comps.size())
            throw SweepError("component count changes inside the band (" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "): missed critical value?");
    }

    // ---- sweep
    const double slack = region.window.length() / (region.lattice_s->size() - 1);
    struct PendingEdge {
        int lo_vertex;
    };
    std::vector<PendingEdge> pending;
    std::vector<int> open;  // per current-band component: index into pending, or -1

    auto new_vertex = [&](double h, VertexKind kind, const SliceInterval& fp) {
        ReebVertex v;
        v.id = static_cast<int>(g.vertices.size());
        v.height = h;
        v.kind = kind;
        v.footprint_lo = fp.lo;
        v.footprint_hi = fp.hi;
        v.truncated = fp.clipped();
        g.vertices.push_back(v);
        return v.id;
    };

    for (size_t e = 0; e < events.size(); ++e) {
        const EventGroup& ev = events[e];
        const std::vector<SliceInterval>* below =
            (e == 0) ? nullptr : &bands[e - 1].hi_comps;
        const std::vector<SliceInterval>* above =
            (e + 1 == events.size()) ? nullptr : &bands[e].lo_comps;

        LevelSlice es = slice(region, ev.height);
        const auto& E = es.intervals;

        std::vector<std::vector<int>> lowers(E.size()), uppers(E.size());
        if (below) {
            for (size_t k = 0; k < below->size(); ++k) {
                const int j = best_overlap((*below)[k], E, slack);
                if (j < 0)
                    throw SweepError("component below height " + std::to_string(ev.height) +
                                     " matches no event component");
                lowers[static_cast<size_t>(j)].push_back(static_cast<int>(k));
            }
        }
        if (above) {
            for (size_t k = 0; k < above->size(); ++k) {
                const int j = best_overlap((*above)[k], E, slack);
                if (j < 0)
                    throw SweepError("component above height " + std::to_string(ev.height) +
                                     " matches no event component");
                uppers[static_cast<size_t>(j)].push_back(static_cast<int>(k));
            }
        }

        std::vector<std::vector<const CritRef*>> crits(E.size());
        for (const auto& c : ev.crits) {
            SliceInterval locus{c.lo, c.hi};
            const int j = best_overlap(locus, E, slack);
            if (j < 0)
                throw SweepError("critical point at s = " + std::to_string(c.lo) +
                                 " (value " + std::to_string(c.value) +
                                 ") lies outside every event component");
            crits[static_cast<size_t>(j)].push_back(&c);
        }

        std::vector<int> next_open(above ? above->size() : 0, -1);
        for (size_t j = 0; j < E.size(); ++j) {
            const bool passage = crits[j].empty() && !ev.is_bound && lowers[j].size() == 1 &&
                                 uppers[j].size() == 1;
            if (passage) {
                next_open[static_cast<size_t>(uppers[j][0])] = open[static_cast<size_t>(lowers[j][0])];
                continue;
            }
            VertexKind kind;
            if (ev.is_bound || E[j].clipped()) {
                kind = VertexKind::cut;
            } else if (!crits[j].empty()) {
                kind = VertexKind::critical;
            } else {
                throw SweepError("component count change at non-critical height " +
                                 std::to_string(ev.height) + ": missed critical point?");
            }
            double h = ev.height;
            if (!crits[j].empty()) {
                h = 0.0;
                for (const auto* c : crits[j]) h += c->value;
                h /= static_cast<double>(crits[j].size());
            }
            const int vid = new_vertex(h, kind, E[j]);
            for (int k : lowers[j]) {
                const int pe = open[static_cast<size_t>(k)];
                g.edges.push_back({pending[static_cast<size_t>(pe)].lo_vertex, vid});
            }
            for (int k : uppers[j]) {
                pending.push_back({vid});
                next_open[static_cast<size_t>(k)] = static_cast<int>(pending.size()) - 1;
            }
        }
        for (int idx : next_open)
            if (idx < 0) throw SweepError("band component not attached at height " +
                                          std::to_string(ev.height));
        open = std::move(next_open);
    }
    if (!open.empty()) throw SweepError("open edges remain after the top event");

    for (auto& v : g.vertices) v.degree = 0;
    for (const auto& ed : g.edges) {
        ++g.vertices[static_cast<size_t>(ed.lo)].degree;
        ++g.vertices[static_cast<size_t>(ed.hi)].degree;
    }
    // orientation sanity: lower id of each edge must sit strictly lower
    for (auto& ed : g.edges) {
        if (g.vertex(ed.lo).height > g.vertex(ed.hi).height) std::swap(ed.lo, ed.hi);
        if (g.vertex(ed.lo).height == g.vertex(ed.hi).height)
            throw SweepError("edge with equal endpoint heights");
    }
    return g;
}

}  // namespace reebstrip
