#include "reebstrip/critical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace reebstrip {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// g(x) = c'(x) - level, with g'(x) = c''(x). All detection below runs on this
// shifted derivative so the same scan serves find_critical_set (level = 0)
// and the rotation construction's slope query.
struct DerivScan {
    const TSFunction& f;
    double level;

    struct Sample {
        double x;
        double g = 0.0;
        double gp = 0.0;
        bool ok = false;
    };

    Sample at(double x) const {
        Sample s;
        s.x = x;
        try {
            Jet2 j = f.jet(x);
            if (j.overflow || !std::isfinite(j.d1) || !std::isfinite(j.d2)) return s;
            s.g = j.d1 - level;
            s.gp = j.d2;
            s.ok = true;
        } catch (const EvalError&) {
        }
        return s;
    }

    double g_at(double x) const { return at(x).g; }
};

// Bracketing bisection on g between a and b (sign change assumed).
double bisect_root(const DerivScan& scan, double a, double b, double ga, double tol_root) {
    int sa = sgn(ga);
    for (int it = 0; it < 200 && (b - a) > tol_root; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = scan.g_at(mid);
        if (gm == 0.0) return mid;
        if (sgn(gm) == sa) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

struct PointRoot {
    double x;
    bool tangential = false;
};

}  // namespace

const char* to_string(CriticalKind k) {
    switch (k) {
        case CriticalKind::local_min: return "local_min";
        case CriticalKind::local_max: return "local_max";
        case CriticalKind::non_extremum: return "non_extremum";
        case CriticalKind::interval_flat: return "interval_flat";
    }
    return "?";
}

namespace {

struct ScanResult {
    std::vector<PointRoot> roots;
    std::vector<std::pair<double, double>> flats;  // refined [lo, hi]
};

ScanResult scan_derivative(const DerivScan& scan, const Window& w, const Tolerances& tol) {
    const int n = std::max(tol.lattice_n, 64);
    const double step = w.length() / (n - 1);

    std::vector<DerivScan::Sample> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = scan.at(w.lo + step * i);

    ScanResult out;

    // Flat runs: consecutive samples with |g| below tol.flat spanning more
    // than tol.flat_len. Runs shorter than that fall through to root logic.
    std::vector<char> in_flat(n, 0);
    {
        int i = 0;
        while (i < n) {
            if (!samples[i].ok || std::abs(samples[i].g) >= tol.flat) {
                ++i;
                continue;
            }
            int j = i;
            while (j + 1 < n && samples[j + 1].ok && std::abs(samples[j + 1].g) < tol.flat) ++j;
            const double raw_len = samples[j].x - samples[i].x;
            if (raw_len > tol.flat_len) {
                double lo = samples[i].x, hi = samples[j].x;
                // push the endpoints to where |g| crosses tol.flat
                if (i > 0 && samples[i - 1].ok) {
                    double a = samples[i - 1].x, b = lo;
                    for (int it = 0; it < 60 && (b - a) > tol.root; ++it) {
                        double mid = 0.5 * (a + b);
                        (std::abs(scan.g_at(mid)) < tol.flat ? b : a) = mid;
                    }
                    lo = b;
                }
                if (j + 1 < n && samples[j + 1].ok) {
                    double a = hi, b = samples[j + 1].x;
                    for (int it = 0; it < 60 && (b - a) > tol.root; ++it) {
                        double mid = 0.5 * (a + b);
                        (std::abs(scan.g_at(mid)) < tol.flat ? a : b) = mid;
                    }
                    hi = a;
                }
                out.flats.emplace_back(lo, hi);
                for (int k = i; k <= j; ++k) in_flat[k] = 1;
            }
            i = j + 1;
        }
    }

    for (int i = 0; i + 1 < n; ++i) {
        if (!samples[i].ok || !samples[i + 1].ok) continue;
        if (in_flat[i] && in_flat[i + 1]) continue;
        const double ga = samples[i].g, gb = samples[i + 1].g;
        if (ga == 0.0 && !in_flat[i]) {
            if (i == 0 || !samples[i - 1].ok || samples[i - 1].g != 0.0)
                out.roots.push_back({samples[i].x, false});
            continue;
        }
        if (sgn(ga) != sgn(gb) && gb != 0.0) {
            out.roots.push_back({bisect_root(scan, samples[i].x, samples[i + 1].x, ga, tol.root), false});
            continue;
        }
        // shrinking-oscillation guard: where |g| dips near zero without a
        // lattice-visible sign change, subsample once
        if (std::min(std::abs(ga), std::abs(gb)) < 10.0 * tol.flat) {
            const int sub = 16;
            double px = samples[i].x, pg = ga;
            for (int k = 1; k <= sub; ++k) {
                const double cx = samples[i].x + step * k / sub;
                const double cg = (k == sub) ? gb : scan.g_at(cx);
                if (pg != 0.0 && cg != 0.0 && sgn(pg) != sgn(cg))
                    out.roots.push_back({bisect_root(scan, px, cx, pg, tol.root), false});
                px = cx;
                pg = cg;
            }
        }
    }

    // Tangential zeros: extrema of g (sign changes of g') where |g| dips
    // under tol.touch but keeps its sign. Needed for slopes that touch the
    // level without crossing, e.g. cos(x) - 1.
    for (int i = 0; i + 1 < n; ++i) {
        if (!samples[i].ok || !samples[i + 1].ok) continue;
        if (in_flat[i] || in_flat[i + 1]) continue;
        const double pa = samples[i].gp, pb = samples[i + 1].gp;
        if (pa == 0.0 || pb == 0.0 || sgn(pa) == sgn(pb)) continue;
        if (std::min(std::abs(samples[i].g), std::abs(samples[i + 1].g)) > 1.0) continue;
        // bisect g' to locate the extremum of g
        double a = samples[i].x, b = samples[i + 1].x;
        int sa = sgn(pa);
        for (int it = 0; it < 200 && (b - a) > tol.root; ++it) {
            const double mid = 0.5 * (a + b);
            const auto sm = scan.at(mid);
            if (!sm.ok || sm.gp == 0.0) break;
            (sgn(sm.gp) == sa ? a : b) = mid;
        }
        const double q = 0.5 * (a + b);
        const double gq = scan.g_at(q);
        if (std::abs(gq) > tol.touch) continue;
        const double gl = scan.g_at(std::max(w.lo, q - tol.side));
        const double gr = scan.g_at(std::min(w.hi, q + tol.side));
        if (sgn(gl) != 0 && sgn(gl) == sgn(gr))  // no crossing: genuine tangency
            out.roots.push_back({q, true});
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const PointRoot& a, const PointRoot& b) { return a.x < b.x; });

    // drop duplicates found twice by different detectors
    std::vector<PointRoot> dedup;
    for (const auto& r : out.roots) {
        if (!dedup.empty() && std::abs(r.x - dedup.back().x) <= 4.0 * tol.side &&
            dedup.back().tangential != r.tangential)
            continue;
        if (!dedup.empty() && std::abs(r.x - dedup.back().x) <= 0.5 * tol.root) continue;
        bool inside_flat = false;
        for (const auto& fl : out.flats)
            if (r.x >= fl.first - tol.side && r.x <= fl.second + tol.side) inside_flat = true;
        if (!inside_flat) dedup.push_back(r);
    }
    out.roots = std::move(dedup);
    return out;
}

}  // namespace

CriticalSet find_critical_set(const TSFunction& f, const Window& window, const Tolerances& tol) {
    DerivScan scan{f, 0.0};
    ScanResult sr = scan_derivative(scan, window, tol);

    if (static_cast<int>(sr.roots.size() + sr.flats.size()) > tol.max_items)
        throw AccumulationError(std::to_string(sr.roots.size() + sr.flats.size()) +
                                " critical items exceed max_items on the window");
    for (size_t i = 0; i + 1 < sr.roots.size(); ++i)
        if (sr.roots[i + 1].x - sr.roots[i].x < tol.root)
            throw AccumulationError("two roots of c' within root tolerance near x = " +
                                    std::to_string(sr.roots[i].x));

    CriticalSet cs;
    cs.window = window;
    const double step = window.length() / (std::max(tol.lattice_n, 64) - 1);

    auto deriv_sign_at = [&](double x) -> int {
        if (x < window.lo || x > window.hi) return 0;
        const auto s = scan.at(x);
        return s.ok ? sgn(s.g) : 0;
    };

    for (const auto& r : sr.roots) {
        CriticalItem item;
        item.locus_lo = item.locus_hi = r.x;
        const Jet2 jr = f.jet(r.x);
        item.value = jr.v;
        item.sign_left = deriv_sign_at(r.x - tol.side);
        item.sign_right = deriv_sign_at(r.x + tol.side);
        if (item.sign_left < 0 && item.sign_right > 0)
            item.kind = CriticalKind::local_min;
        else if (item.sign_left > 0 && item.sign_right < 0)
            item.kind = CriticalKind::local_max;
        else
            item.kind = CriticalKind::non_extremum;

        // Nondegeneracy is judged against the local slope scale rather than an
        // absolute floor: critical points of exponentially flat functions keep
        // exponentially small |c''| yet are honest quadratic zeros.
        const double d2 = jr.d2;
        const double fd_scale =
            std::max(std::abs(scan.g_at(std::max(window.lo, r.x - tol.side))),
                     std::abs(scan.g_at(std::min(window.hi, r.x + tol.side)))) /
            tol.side;
        item.nondegenerate = std::isfinite(d2) && fd_scale > 0.0 &&
                             std::abs(d2) > tol.hess_rel * fd_scale;
        cs.items.push_back(item);
    }

    for (const auto& fl : sr.flats) {
        CriticalItem item;
        item.locus_lo = fl.first;
        item.locus_hi = fl.second;
        item.value = f.value(0.5 * (fl.first + fl.second));
        item.kind = CriticalKind::interval_flat;
        item.nondegenerate = false;
        item.sign_left = deriv_sign_at(fl.first - tol.side);
        item.sign_right = deriv_sign_at(fl.second + tol.side);
        cs.items.push_back(item);
    }

    std::sort(cs.items.begin(), cs.items.end(),
              [](const CriticalItem& a, const CriticalItem& b) { return a.locus_lo < b.locus_lo; });

    cs.gap = kInf;
    for (size_t i = 0; i + 1 < cs.items.size(); ++i)
        cs.gap = std::min(cs.gap, std::abs(cs.items[i].value - cs.items[i + 1].value));

    for (const auto& it : cs.items)
        if (it.locus_lo <= window.lo + step || it.locus_hi >= window.hi - step) cs.truncated = true;

    return cs;
}

std::vector<double> find_derivative_level_set(const TSFunction& f, double level,
                                              const Window& window, const Tolerances& tol) {
    DerivScan scan{f, level};
    ScanResult sr = scan_derivative(scan, window, tol);
    std::vector<double> loci;
    for (const auto& r : sr.roots) loci.push_back(r.x);
    for (const auto& fl : sr.flats) loci.push_back(0.5 * (fl.first + fl.second));
    std::sort(loci.begin(), loci.end());
    return loci;
}

nlohmann::json to_json(const CriticalSet& cs) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : cs.items) {
        nlohmann::json j;
        if (it.is_point())
            j["locus"] = it.locus_lo;
        else
            j["locus"] = {it.locus_lo, it.locus_hi};
        j["value"] = it.value;
        j["kind"] = to_string(it.kind);
        j["nondegenerate"] = it.nondegenerate;
        items.push_back(std::move(j));
    }
    return {{"items", std::move(items)},
            {"gap", std::isfinite(cs.gap) ? nlohmann::json(cs.gap) : nlohmann::json()},
            {"truncated", cs.truncated},
            {"window", {cs.window.lo, cs.window.hi}}};
}

}  // namespace reebstrip
