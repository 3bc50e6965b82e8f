#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "reebstrip/function.hpp"
#include "reebstrip/tolerances.hpp"

namespace reebstrip {

// The closed planar region between the graphs of c1 < c2 over a window,
// with cached boundary values on a uniform lattice for slicing.
struct StripRegion {
    TSFunction c1, c2;
    Window window;
    double separation_certificate = 0.0;  // refined lattice min of c2 - c1

    std::shared_ptr<const std::vector<double>> lattice_s;
    std::shared_ptr<const std::vector<double>> lattice_c1;
    std::shared_ptr<const std::vector<double>> lattice_c2;

    double height_min() const;  // lattice min of c1
    double height_max() const;  // lattice max of c2
};

struct SeparationError : std::runtime_error {
    double witness;
    SeparationError(double s, double diff)
        : std::runtime_error("separation violated: c2 - c1 = " + std::to_string(diff) +
                             " at s = " + std::to_string(s)),
          witness(s) {}
};

struct SliceInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool clipped_lo = false;  // touches window.lo
    bool clipped_hi = false;
    bool clipped() const { return clipped_lo || clipped_hi; }
    bool overlaps(const SliceInterval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

// Level set of the height over the closed strip at level t: the maximal
// components of {s in window : c1(s) <= t <= c2(s)}, sorted and disjoint.
struct LevelSlice {
    double level = 0.0;
    std::vector<SliceInterval> intervals;
    bool degenerate = false;  // a tangential boundary contact was resolved at this level
};

StripRegion make_region(TSFunction c1, TSFunction c2, const Window& window,
                        int lattice_n = 16384);

LevelSlice slice(const StripRegion& region, double t);

nlohmann::json to_json(const LevelSlice& s);

}  // namespace reebstrip
