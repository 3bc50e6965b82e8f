#pragma once

#include <optional>
#include <string>

#include "reebstrip/reeb.hpp"

namespace reebstrip {

// Brute-force Reeb graph on a uniform (level x s) grid: per-level interval
// components linked by index-range overlap, regular chains collapsed to
// edges, link-structure changes collapsed to vertices. Independent of the
// sweep, the slicer and the critical-set detector.
ReebGraph grid_reeb(const StripRegion& region, std::optional<Window> heights = std::nullopt,
                    int n_t = 4096, int n_s = 8192);

struct EquivalenceResult {
    bool equivalent = false;
    std::string certificate;  // matched pairs, or the first counterexample
};

// Height-respecting graph equivalence: a bijection of vertices matching kind
// and degree, heights within tol_h and footprints with nonempty overlap,
// extending to an edge bijection. Greedy by height with backtracking.
EquivalenceResult graphs_equivalent(const ReebGraph& g1, const ReebGraph& g2, double tol_h);

}  // namespace reebstrip
