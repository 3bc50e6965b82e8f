#include "reebstrip/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reebstrip/critical.hpp"

namespace reebstrip {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::window_limited_holds: return "window_limited_holds";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

MorseCheck morse_check(const TSFunction& f, const Window& window, const Tolerances& tol) {
    MorseCheck out;
    out.is_morse = true;
    const auto cs = f.critical_set(window, tol);
    for (const auto& it : cs->items) {
        if (it.kind == CriticalKind::interval_flat) {
            out.is_morse = false;
            out.witnesses.push_back("flat critical interval [" + std::to_string(it.locus_lo) +
                                    ", " + std::to_string(it.locus_hi) + "]");
        } else if (!it.nondegenerate) {
            out.is_morse = false;
            out.witnesses.push_back("degenerate critical point at x = " +
                                    std::to_string(it.locus_lo));
        }
    }
    return out;
}

namespace {

// Tail behaviour of f on one side, from probes at +-2^k, k = 3..9.
struct TailEstimate {
    enum class Kind { limit_zero, finite_limit, diverge_up, diverge_down, undetermined } kind =
        Kind::undetermined;
    double value = 0.0;  // for finite_limit
};

TailEstimate estimate_tail(const TSFunction& f, bool plus_side) {
    std::vector<double> vals;
    for (int k = 3; k <= 9; ++k) {
        const double s = (plus_side ? 1.0 : -1.0) * std::ldexp(1.0, k);
        try {
            const Jet2 j = f.jet(s);
            if (j.overflow || std::isnan(j.v)) break;
            if (std::isinf(j.v)) {
                vals.push_back(j.v);
                break;
            }
            vals.push_back(j.v);
        } catch (const EvalError&) {
            break;
        }
    }
    TailEstimate out;
    if (vals.size() < 3) return out;
    const double last = vals.back();
    const double prev = vals[vals.size() - 2];
    double scale = 0.0;
    for (double v : vals) scale = std::max(scale, std::abs(v));

    if ((std::isinf(last) || std::abs(last) > 1e3) && std::abs(last) >= std::abs(prev)) {
        out.kind = last > 0 ? TailEstimate::Kind::diverge_up : TailEstimate::Kind::diverge_down;
        return out;
    }
    // geometric-looking decay of |f| reads as limit zero down to double
    // resolution; a settled difference sequence reads as a finite limit
    if (last == 0.0 || (std::abs(last) <= 0.9 * std::abs(prev) &&
                        std::abs(prev) <= 0.9 * std::abs(vals[vals.size() - 3]))) {
        out.kind = TailEstimate::Kind::limit_zero;
        return out;
    }
    const double d_last = std::abs(last - prev);
    const double d_prev = std::abs(prev - vals[vals.size() - 3]);
    if (d_last <= 0.5 * d_prev || d_last <= 1e-9 * (1.0 + scale)) {
        out.kind = TailEstimate::Kind::finite_limit;
        out.value = last;
        return out;
    }
    return out;
}

struct CritValue {
    double value;
    double locus;
    int fn;
};

}  // namespace

StabilityReport classify_stability(const StripRegion& region, const Tolerances& tol) {
    StabilityReport rep;
    const auto cs1 = region.c1.critical_set(region.window, tol);
    const auto cs2 = region.c2.critical_set(region.window, tol);

    // ---- morse
    const MorseCheck m1 = morse_check(region.c1, region.window, tol);
    const MorseCheck m2 = morse_check(region.c2, region.window, tol);
    rep.morse = (m1.is_morse && m2.is_morse) ? Verdict::holds : Verdict::fails;
    for (const auto& w : m1.witnesses) rep.evidence.push_back("c1: " + w);
    for (const auto& w : m2.witnesses) rep.evidence.push_back("c2: " + w);

    std::vector<CritValue> values;
    for (const auto& it : cs1->items) values.push_back({it.value, it.locus_mid(), 1});
    for (const auto& it : cs2->items) values.push_back({it.value, it.locus_mid(), 2});
    std::sort(values.begin(), values.end(),
              [](const CritValue& a, const CritValue& b) { return a.value < b.value; });

    if (values.empty()) {
        // vacuous: no critical points at all
        rep.critical_values_injective = Verdict::holds;
        rep.stable_sufficient = Verdict::holds;
        rep.strongly_stable = Verdict::holds;
        rep.infinitesimally_stable = Verdict::holds;
        return rep;
    }

    // ---- injectivity (relative separation; see tolerances)
    bool injective = true;
    for (size_t i = 0; i + 1 < values.size(); ++i) {
        const double a = values[i].value, b = values[i + 1].value;
        if (std::abs(b - a) <= tol.inject_rel * (std::abs(a) + std::abs(b))) {
            injective = false;
            rep.evidence.push_back("critical values clash: " + std::to_string(a) + " (x=" +
                                   std::to_string(values[i].locus) + ") vs " + std::to_string(b) +
                                   " (x=" + std::to_string(values[i + 1].locus) + ")");
        }
    }
    rep.critical_values_injective = injective ? Verdict::holds : Verdict::fails;

    // ---- accumulation clusters: >= cluster_min values inside a cluster_ball
    // window; the non-properness witness also needs their loci to spread past
    // half the window
    bool cluster_with_diverging_loci = false;
    for (size_t i = 0; i < values.size(); ++i) {
        size_t j = i;
        while (j + 1 < values.size() && values[j + 1].value - values[i].value <= tol.cluster_ball)
            ++j;
        if (static_cast<int>(j - i + 1) >= tol.cluster_min) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (size_t k = i; k <= j; ++k) {
                lo = std::min(lo, values[k].locus);
                hi = std::max(hi, values[k].locus);
            }
            if (hi - lo > 0.5 * region.window.length()) {
                cluster_with_diverging_loci = true;
                rep.evidence.push_back(
                    "accumulation cluster near " + std::to_string(values[i].value) + ": " +
                    std::to_string(j - i + 1) + " values, loci spread " + std::to_string(hi - lo));
            }
        }
    }

    // ---- infinitesimal stability: c|S(c) proper is necessary; the cluster
    // with in-window diverging loci is the non-properness witness
    if (!injective || cluster_with_diverging_loci)
        rep.infinitesimally_stable = Verdict::fails;
    else
        rep.infinitesimally_stable = Verdict::window_limited_holds;

    if (!injective) {
        rep.stable_sufficient = Verdict::fails;
        rep.strongly_stable = Verdict::fails;
        return rep;
    }

    // ---- strongly stable: for every critical value v, levels near v must
    // leave the strip on both sides. Within the window this is visible as
    // unclipped slice components; past it we trust tail estimates of c1, c2:
    // the level escapes if the roof sinks below v or the floor rises above v.
    const TailEstimate tails[2][2] = {
        {estimate_tail(region.c1, false), estimate_tail(region.c1, true)},
        {estimate_tail(region.c2, false), estimate_tail(region.c2, true)}};

    bool all_bounded = true;
    bool any_undetermined = false;
    for (const auto& cv : values) {
        const double delta = tol.proper_rel * std::abs(cv.value) + 1e-300;
        LevelSlice sl = slice(region, cv.value + delta);
        LevelSlice sl2 = slice(region, cv.value - delta);
        for (int side = 0; side < 2; ++side) {
            const bool plus = side == 1;
            bool clipped_here = false;
            for (const auto& iv : sl.intervals)
                if ((plus && iv.clipped_hi) || (!plus && iv.clipped_lo)) clipped_here = true;
            for (const auto& iv : sl2.intervals)
                if ((plus && iv.clipped_hi) || (!plus && iv.clipped_lo)) clipped_here = true;
            if (!clipped_here) continue;  // pinch visible inside the window

            const TailEstimate& t1 = tails[0][side];
            const TailEstimate& t2 = tails[1][side];
            auto above = [&](const TailEstimate& t, double v) {
                return t.kind == TailEstimate::Kind::diverge_up ||
                       (t.kind == TailEstimate::Kind::finite_limit && t.value > v + delta) ||
                       (t.kind == TailEstimate::Kind::limit_zero && 0.0 > v + delta);
            };
            auto below = [&](const TailEstimate& t, double v) {
                return t.kind == TailEstimate::Kind::diverge_down ||
                       (t.kind == TailEstimate::Kind::finite_limit && t.value < v - delta) ||
                       (t.kind == TailEstimate::Kind::limit_zero && 0.0 < v - delta);
            };
            if (above(t1, cv.value) || below(t2, cv.value)) continue;  // escapes past the window
            if (t1.kind == TailEstimate::Kind::undetermined ||
                t2.kind == TailEstimate::Kind::undetermined) {
                any_undetermined = true;
                continue;
            }
            all_bounded = false;
            rep.evidence.push_back("level " + std::to_string(cv.value) +
                                   " stays inside the strip toward " + (plus ? "+inf" : "-inf") +
                                   " (preimage not proper)");
        }
    }
    if (!all_bounded)
        rep.strongly_stable = Verdict::fails;
    else if (any_undetermined)
        rep.strongly_stable = Verdict::undetermined;
    else
        rep.strongly_stable = Verdict::window_limited_holds;

    // ---- sufficient condition for stability: outside a compact sub-window
    // the slice structure near every critical value is level-independent
    {
        const double margin = 0.2 * region.window.length();
        const Window left{region.window.lo, region.window.lo + margin};
        const Window right{region.window.hi - margin, region.window.hi};
        bool stable_counts = true;
        for (const auto& cv : values) {
            const double delta = tol.proper_rel * std::abs(cv.value) + 1e-300;
            auto margin_count = [&](double level) {
                int n = 0;
                for (const auto& iv : slice(region, level).intervals)
                    if (iv.lo <= left.hi || iv.hi >= right.lo) ++n;
                return n;
            };
            if (margin_count(cv.value - delta) != margin_count(cv.value + delta)) {
                stable_counts = false;
                rep.evidence.push_back("margin component count changes across level " +
                                       std::to_string(cv.value));
            }
        }
        rep.stable_sufficient = stable_counts ? Verdict::window_limited_holds : Verdict::fails;
    }

    return rep;
}

nlohmann::json to_json(const StabilityReport& r) {
    return {{"verdicts",
             {{"morse", to_string(r.morse)},
              {"critical_values_injective", to_string(r.critical_values_injective)},
              {"stable_sufficient", to_string(r.stable_sufficient)},
              {"strongly_stable", to_string(r.strongly_stable)},
              {"infinitesimally_stable", to_string(r.infinitesimally_stable)}}},
            {"evidence", r.evidence}};
}

}  // namespace reebstrip
