#include <algorithm>
#include <cmath>
#include <limits>

#include "reebstrip/reeb.hpp"

namespace reebstrip {

PredictedVertices predict_mthm2(const CriticalSet& cs1, double a) {
    if (!(a > 0.0)) throw HypothesisError("shift a must be positive");
    if (!(a < cs1.gap))
        throw HypothesisError("shift a = " + std::to_string(a) +
                              " is not below the critical-value gap " + std::to_string(cs1.gap));

    PredictedVertices out;
    out.a = a;
    for (size_t i = 0; i < cs1.items.size(); ++i) {
        const auto& it = cs1.items[i];
        // flat items classify through their flank signs: a plateau passed
        // monotonically behaves like a non-extremum, a plateau top/bottom
        // like the corresponding extremum
        CriticalKind k = it.kind;
        if (k == CriticalKind::interval_flat) {
            if (it.sign_left < 0 && it.sign_right > 0)
                k = CriticalKind::local_min;
            else if (it.sign_left > 0 && it.sign_right < 0)
                k = CriticalKind::local_max;
            else
                k = CriticalKind::non_extremum;
        }
        int deg_lo = 2, deg_hi = 2;
        if (k == CriticalKind::local_min) {
            deg_lo = 1;  // the strip floor dips: an edge is born
            deg_hi = 3;  // the shifted copy splits the component
        } else if (k == CriticalKind::local_max) {
            deg_lo = 3;
            deg_hi = 1;
        }
        out.entries.push_back({it.value, deg_lo, i, false, it.locus_mid()});
        out.entries.push_back({it.value + a, deg_hi, i, true, it.locus_mid()});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const PredictedVertex& x, const PredictedVertex& y) {
                  return x.height < y.height;
              });
    return out;
}

CWReport check_cw_hypotheses(const StripRegion& region, const std::vector<double>& declared_zf,
                             const Tolerances& tol) {
    CWReport rep;
    rep.declared_zf = declared_zf;

    const auto cs1 = region.c1.critical_set(region.window, tol);
    const auto cs2 = region.c2.critical_set(region.window, tol);
    std::vector<double> values;
    for (const auto& it : cs1->items) values.push_back(it.value);
    for (const auto& it : cs2->items) values.push_back(it.value);
    std::sort(values.begin(), values.end());

    // equal critical values from different loci collapse to one point of the
    // value set; "equal" is relative so exponentially small values stay apart
    for (double v : values) {
        if (!rep.critical_values.empty()) {
            const double prev = rep.critical_values.back();
            if (std::abs(v - prev) <= 1e-12 * (std::abs(v) + std::abs(prev))) continue;
        }
        rep.critical_values.push_back(v);
    }

    auto near_zf = [&](double v) {
        for (double z : declared_zf)
            if (std::abs(v - z) <= tol.zf_ball) return true;
        return false;
    };
    std::vector<double> outside;
    for (double v : rep.critical_values)
        if (!near_zf(v)) outside.push_back(v);

    rep.min_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < outside.size(); ++i)
        rep.min_gap = std::min(rep.min_gap, outside[i + 1] - outside[i]);
    rep.discrete_in_window = !std::isfinite(rep.min_gap) || rep.min_gap > tol.discrete;

    // Z_F points must not themselves be critical values; coincidence is
    // relative, so values merely accumulating toward a Z_F point stay clean.
    rep.zf_points_clean = true;
    for (double z : declared_zf)
        for (double v : rep.critical_values)
            if (std::abs(v - z) <= tol.coincide_rel * (std::abs(v) + std::abs(z))) {
                rep.zf_points_clean = false;
                rep.warnings.push_back("critical value " + std::to_string(v) +
                                       " coincides with declared Z_F point " + std::to_string(z));
            }

    // accumulation clusters among values outside declared Z_F balls: maximal
    // runs of >= 3 values with consecutive gaps below tol.discrete
    rep.closed_away_from_zf = true;
    size_t i = 0;
    while (i + 1 < outside.size()) {
        size_t j = i;
        while (j + 1 < outside.size() && outside[j + 1] - outside[j] < tol.discrete) ++j;
        if (j - i + 1 >= 3) {
            rep.closed_away_from_zf = false;
            const double center = 0.5 * (outside[i] + outside[j]);
            rep.warnings.push_back("accumulation cluster of " + std::to_string(j - i + 1) +
                                   " critical values near " + std::to_string(center) +
                                   " (candidate missing Z_F point)");
        }
        i = (j == i) ? i + 1 : j + 1;
    }

    return rep;
}

nlohmann::json to_json(const PredictedVertices& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : p.entries)
        arr.push_back({{"height", e.height},
                       {"degree", e.degree},
                       {"item", e.item_index},
                       {"copy", e.shifted ? "c2" : "c1"},
                       {"locus", e.locus}});
    return {{"a", p.a}, {"vertices", std::move(arr)}};
}

nlohmann::json to_json(const CWReport& r) {
    return {{"critical_values", r.critical_values},
            {"min_gap", std::isfinite(r.min_gap) ? nlohmann::json(r.min_gap) : nlohmann::json()},
            {"declared_Z_F", r.declared_zf},
            {"verdicts",
             {{"discrete_in_window", r.discrete_in_window},
              {"closed_away_from_ZF", r.closed_away_from_zf},
              {"ZF_points_clean", r.zf_points_clean}}},
            {"warnings", r.warnings}};
}

}  // namespace reebstrip
