#pragma once

namespace reebstrip {

// Shared numeric knobs. Field names follow the operation contracts; each
// module reads only what it needs.
struct Tolerances {
    // critical-set detection
    double root = 1e-12;      // bisection bracket width for roots of c'
    double flat = 1e-9;       // |c'| below this counts as flat
    double side = 1e-6;       // probe offset for kind classification
    double flat_len = 1e-4;   // minimum length of a flat run
    double touch = 1e-8;      // |c'| at an extremum of c' counting as a tangential zero
    double hess_rel = 0.25;   // |c''| vs local finite-difference scale for nondegeneracy
    int max_items = 4096;
    int lattice_n = 16384;    // default sampling lattice (2^14)

    // sweep
    double event_gap = 1e-7;

    // CW hypothesis checks
    double discrete = 1e-6;   // min pairwise gap of critical values
    double zf_ball = 1e-3;    // exclusion radius around declared Z_F points
    double coincide_rel = 1e-8;  // relative tolerance for "value equals Z_F point"

    // stability
    double inject_rel = 1e-8;    // relative critical-value separation
    double cluster_ball = 1e-3;  // accumulation ball width
    int cluster_min = 5;         // values per accumulation cluster
    double proper_rel = 1e-3;    // margins in properness surrogates

    // manifold certification
    double residual = 1e-8;   // critical residual threshold
    double hess_abs = 1e-6;   // restricted-Hessian nondegeneracy
    double zero_set = 1e-10;  // |F| bound for sampled points
};

struct Window {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

}  // namespace reebstrip
