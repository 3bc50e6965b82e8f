#pragma once

#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "reebstrip/function.hpp"
#include "reebstrip/tolerances.hpp"

namespace reebstrip {

enum class CriticalKind { local_min, local_max, non_extremum, interval_flat };

// One connected component of S(c) clipped to the window: an isolated point
// or a closed interval on which c' vanishes. `value` is the single value c
// takes on the locus.
struct CriticalItem {
    double locus_lo = 0.0;
    double locus_hi = 0.0;  // == locus_lo for point items
    double value = 0.0;
    CriticalKind kind = CriticalKind::non_extremum;
    bool nondegenerate = false;
    // signs of c' just left/right of the locus (+1, -1, or 0 if unavailable)
    int sign_left = 0;
    int sign_right = 0;

    bool is_point() const { return kind != CriticalKind::interval_flat; }
    double locus_mid() const { return 0.5 * (locus_lo + locus_hi); }
};

struct CriticalSet {
    std::vector<CriticalItem> items;  // sorted by locus_lo
    Window window;
    double gap = 0.0;        // min |value_i - value_{i+1}| over locus-adjacent items
    bool truncated = false;  // an item touches the window edge; more may lie outside
};

// Raised when root structure cannot be resolved at the configured resolution:
// more than max_items components, or two roots inside one root-tolerance.
struct AccumulationError : std::runtime_error {
    explicit AccumulationError(const std::string& msg)
        : std::runtime_error("possible accumulation: " + msg) {}
};

// Detect S(c) on the window: bracketing bisection on sign changes of c',
// tangential zeros located through extrema of c', and flat runs where
// |c'| stays below tol.flat over more than tol.flat_len.
CriticalSet find_critical_set(const TSFunction& f, const Window& window, const Tolerances& tol);

// Loci where c'(x) == level, including tangential solutions. Used by the
// rotation construction to enumerate {x : c0'(x) = a_c}.
std::vector<double> find_derivative_level_set(const TSFunction& f, double level,
                                              const Window& window, const Tolerances& tol);

inline bool is_extremum(const CriticalItem& item) {
    return item.kind == CriticalKind::local_min || item.kind == CriticalKind::local_max;
}

const char* to_string(CriticalKind k);
nlohmann::json to_json(const CriticalSet& cs);

}  // namespace reebstrip
