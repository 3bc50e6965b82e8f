#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "reebstrip/critical.hpp"
#include "reebstrip/strip.hpp"

namespace reebstrip {

enum class VertexKind { critical, cut, end };

struct ReebVertex {
    int id = 0;
    double height = 0.0;
    VertexKind kind = VertexKind::critical;
    double footprint_lo = 0.0;
    double footprint_hi = 0.0;
    int degree = 0;
    bool truncated = false;  // footprint touches the s-window boundary
};

struct ReebEdge {
    int lo = 0;  // vertex at the lower height
    int hi = 0;
};

// Reeb digraph of the height function over the strip closure. Edges are
// oriented from lower to higher height; endpoint heights are always distinct.
struct ReebGraph {
    std::vector<ReebVertex> vertices;
    std::vector<ReebEdge> edges;
    Window window;          // s-window
    Window heights;         // swept height range
    std::vector<std::string> warnings;

    int non_cut_count() const;
    const ReebVertex& vertex(int id) const { return vertices.at(static_cast<size_t>(id)); }
};

struct ReebOptions {
    std::optional<Window> heights;  // default: full strip height range
    double event_gap = 1e-7;
    Tolerances tol;
};

struct SweepError : std::runtime_error {
    explicit SweepError(const std::string& msg) : std::runtime_error(msg) {}
};

// Event-driven sweep. Events sit at critical values of c1 and c2 and at the
// heights where a boundary graph meets the window's side edges; one slice per
// band midpoint plus approach slices at band ends carry components across
// events by footprint overlap.
ReebGraph build_reeb_graph(const StripRegion& region, const ReebOptions& opts = {});

// ---------------------------------------------------------------- predictor

struct PredictedVertex {
    double height = 0.0;
    int degree = 0;
    size_t item_index = 0;  // which critical item of c1
    bool shifted = false;   // false: the c1 copy at v, true: the c2 copy at v+a
    double locus = 0.0;
};

struct PredictedVertices {
    std::vector<PredictedVertex> entries;  // sorted by height
    double a = 0.0;
};

struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Vertex multiset for the pair (c1, c1 + a) with 0 < a < gap(S(c1)):
// a local minimum at value v contributes (v, 1) and (v+a, 3), a local maximum
// (v, 3) and (v+a, 1), a non-extremum (v, 2) and (v+a, 2). Flat items follow
// their flank signs.
PredictedVertices predict_mthm2(const CriticalSet& cs1, double a);

// ------------------------------------------------------------- CW checker

struct CWReport {
    std::vector<double> critical_values;  // deduplicated, sorted
    double min_gap = 0.0;                 // over values outside Z_F balls
    std::vector<double> declared_zf;
    bool discrete_in_window = false;
    bool closed_away_from_zf = false;
    bool zf_points_clean = false;
    std::vector<std::string> warnings;
    bool all_hold() const { return discrete_in_window && closed_away_from_zf && zf_points_clean; }
};

CWReport check_cw_hypotheses(const StripRegion& region, const std::vector<double>& declared_zf,
                             const Tolerances& tol);

nlohmann::json to_json(const ReebGraph& g);
nlohmann::json to_json(const PredictedVertices& p);
nlohmann::json to_json(const CWReport& r);
std::string to_dot(const ReebGraph& g);
std::string to_svg(const ReebGraph& g, const StripRegion& region);

}  // namespace reebstrip
