#include "reebstrip/strip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reebstrip/critical.hpp"

namespace reebstrip {

namespace {

int sgn(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Ternary-search refinement of a local minimum of g bracketed by lattice
// neighbours; returns the refined minimum value.
double refine_min(const TSFunction& f1, const TSFunction& f2, double a, double b) {
    auto g = [&](double s) { return f2.value(s) - f1.value(s); };
    for (int it = 0; it < 90 && (b - a) > 1e-7; ++it) {
        const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (g(m1) < g(m2))
            b = m2;
        else
            a = m1;
    }
    return g(0.5 * (a + b));
}

}  // namespace

double StripRegion::height_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : *lattice_c1)
        if (std::isfinite(v)) m = std::min(m, v);
    return m;
}

double StripRegion::height_max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : *lattice_c2)
        if (std::isfinite(v)) m = std::max(m, v);
    return m;
}

StripRegion make_region(TSFunction c1, TSFunction c2, const Window& window, int lattice_n) {
    const int n = std::max(lattice_n, 64);
    auto s = std::make_shared<std::vector<double>>(n);
    auto v1 = std::make_shared<std::vector<double>>(n);
    auto v2 = std::make_shared<std::vector<double>>(n);
    const double step = window.length() / (n - 1);

    double worst = std::numeric_limits<double>::infinity();
    int worst_i = 0;
    for (int i = 0; i < n; ++i) {
        const double x = window.lo + step * i;
        (*s)[i] = x;
        (*v1)[i] = c1.value(x);
        (*v2)[i] = c2.value(x);
        const double d = (*v2)[i] - (*v1)[i];
        if (d <= 0.0) throw SeparationError(x, d);
        if (d < worst) {
            worst = d;
            worst_i = i;
        }
    }

    // tighten the certificate around the lattice minimum of c2 - c1
    const double a = (*s)[std::max(0, worst_i - 1)];
    const double b = (*s)[std::min(n - 1, worst_i + 1)];
    const double refined = refine_min(c1, c2, a, b);
    if (refined <= 0.0) throw SeparationError(0.5 * (a + b), refined);

    StripRegion r;
    r.c1 = std::move(c1);
    r.c2 = std::move(c2);
    r.window = window;
    r.separation_certificate = std::min(worst, refined);
    r.lattice_s = std::move(s);
    r.lattice_c1 = std::move(v1);
    r.lattice_c2 = std::move(v2);
    return r;
}

namespace {

// Roots of c - t on the window using the cached lattice for bracketing,
// bisection on fresh evaluations for refinement. Tangential contacts (local
// minima of |c - t| that reach the level without a sign change) are located
// through a ternary search and flagged.
void boundary_roots(const TSFunction& f, const std::vector<double>& xs,
                    const std::vector<double>& vs, double t, std::vector<double>& roots,
                    bool& degenerate) {
    const size_t n = xs.size();
    auto g = [&](double s) { return f.value(s) - t; };

    for (size_t i = 0; i + 1 < n; ++i) {
        const double ga = vs[i] - t, gb = vs[i + 1] - t;
        if (!std::isfinite(ga) || !std::isfinite(gb)) continue;
        if (ga == 0.0) {
            if (i == 0 || vs[i - 1] - t != 0.0) roots.push_back(xs[i]);
            continue;
        }
        if (gb == 0.0) continue;  // handled at the next i
        if (sgn(ga) != sgn(gb)) {
            double a = xs[i], b = xs[i + 1];
            const int sa = sgn(ga);
            for (int it = 0; it < 90 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                (sgn(gm) == sa ? a : b) = mid;
            }
            roots.push_back(0.5 * (a + b));
        }
    }

    // tangential contacts: lattice-local minima of |g| that dip to ~0
    const double scale = 1.0 + std::abs(t);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double gm = std::abs(vs[i] - t);
        if (!std::isfinite(gm) || gm > 1e-5 * scale) continue;
        if (gm > std::abs(vs[i - 1] - t) || gm > std::abs(vs[i + 1] - t)) continue;
        if ((vs[i] - t) != 0.0 && (sgn(vs[i - 1] - t) != sgn(vs[i] - t) ||
                                   sgn(vs[i + 1] - t) != sgn(vs[i] - t)))
            continue;  // a crossing, already bracketed above
        double a = xs[i - 1], b = xs[i + 1];
        for (int it = 0; it < 90 && (b - a) > 1e-12; ++it) {
            const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
            if (std::abs(g(m1)) < std::abs(g(m2)))
                b = m2;
            else
                a = m1;
        }
        const double q = 0.5 * (a + b);
        if (std::abs(g(q)) <= 1e-9 * scale) {
            roots.push_back(q);
            degenerate = true;
        }
    }
}

}  // namespace

LevelSlice slice(const StripRegion& region, double t) {
    LevelSlice out;
    out.level = t;

    std::vector<double> brk{region.window.lo, region.window.hi};
    boundary_roots(region.c1, *region.lattice_s, *region.lattice_c1, t, brk, out.degenerate);
    boundary_roots(region.c2, *region.lattice_s, *region.lattice_c2, t, brk, out.degenerate);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
              brk.end());

    const double scale = 1.0 + std::abs(t);
    auto inside_at = [&](double s) {
        const double a = t - region.c1.value(s);
        const double b = region.c2.value(s) - t;
        if (a >= 0.0 && b >= 0.0) return true;
        // boundary contact up to root-refinement error counts as inside
        return std::min(std::abs(a), std::abs(b)) <= 1e-9 * scale;
    };

    const size_t gaps = brk.size() - 1;
    std::vector<char> gap_inside(gaps, 0);
    for (size_t i = 0; i < gaps; ++i)
        gap_inside[i] = inside_at(0.5 * (brk[i] + brk[i + 1])) ? 1 : 0;

    // maximal runs of inside gaps; breakpoints that are inside while both
    // flanking gaps are outside become zero-length components
    auto push_interval = [&](double lo, double hi) {
        SliceInterval iv;
        iv.lo = lo;
        iv.hi = hi;
        iv.clipped_lo = lo <= region.window.lo + 1e-12;
        iv.clipped_hi = hi >= region.window.hi - 1e-12;
        out.intervals.push_back(iv);
    };

    size_t i = 0;
    while (i < gaps) {
        if (!gap_inside[i]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j + 1 < gaps && gap_inside[j + 1]) ++j;
        push_interval(brk[i], brk[j + 1]);
        i = j + 1;
    }
    for (size_t k = 0; k < brk.size(); ++k) {
        const bool left_in = k > 0 && gap_inside[k - 1];
        const bool right_in = k < gaps && gap_inside[k];
        if (!left_in && !right_in && inside_at(brk[k])) push_interval(brk[k], brk[k]);
    }
    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const SliceInterval& a, const SliceInterval& b) { return a.lo < b.lo; });
    return out;
}

nlohmann::json to_json(const LevelSlice& s) {
    nlohmann::json iv = nlohmann::json::array();
    for (const auto& in : s.intervals)
        iv.push_back({{"lo", in.lo}, {"hi", in.hi}, {"clipped", in.clipped()}});
    return {{"level", s.level}, {"intervals", std::move(iv)}, {"degenerate", s.degenerate}};
}

}  // namespace reebstrip
