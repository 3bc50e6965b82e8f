#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reebstrip/function.hpp"

namespace reebstrip {

struct ConstructionError : std::runtime_error {
    explicit ConstructionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Named closed forms:
//   c_H_plus_inf_r(r>0)      sqrt(1 + r x^2)
//   c_H_p1_p2(p1, p2>0)      p1 + (x + sqrt(x^2 + 4 p2))/2
//   c_e_p1_p2(p1 != p2)      (p1 e^x + p2)/(e^x + 1)
//   c_p0(p)                  (2 + sin(e^{x^2}))/p(x)
//   c_p00(p)                 (2 + sin(e^x))/p(x)
//   c_e1                     (2 + sin(e^{x^4}))/e^{x^2}
//   c_e2                     (2 + sin(e^{x^3}))/e^{x^2}
//   gauss_sin                e^{-x^2} sin x
//   runge(a1>0, a2>=0)       a1/(x^2+1) + a2
//   sin, const(k), affine(k,b)
TSFunction catalogue(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

// Rotate the graph {(c0(x), x)} about the origin by theta = arctan(a_c).
// Requires -1/a_cM <= c0' <= a_cm on a generous window and 0 < a_c < a_cM;
// then the new abscissa u(x) = c0(x) sin(theta) + x cos(theta) is strictly
// increasing and the result is again a function, with critical points exactly
// over {x : c0'(x) = a_c}. Evaluation is table-assisted monotone bracketing;
// the result's domain is the image of `preimage_window` under u.
TSFunction rotate_graph(const TSFunction& c0, double a_c, double a_cm, double a_cM,
                        const Window& preimage_window);

// Function pairs of the hyperbola/oscillation constructions.
// Theorems: "4", "5a", "5b", "5c", "6a", "6b", "6c".
// For the 6-family the oscillating part is scaled by a positive factor so
// both images stay inside the open interval between p1 and p2; the factor is
// computed deterministically from the parameters.
std::pair<TSFunction, TSFunction> build_pair(const std::string& theorem,
                                             const nlohmann::json& params);

struct AsymptoticClaim {
    bool at_plus_inf = true;                              // probe direction
    enum class Kind { limit, diverge_up, diverge_down } kind = Kind::limit;
    double limit_value = 0.0;
};

struct AsymptoticReport {
    bool consistent = false;
    bool reduced_confidence = false;  // overflow shrank the probe range
    std::vector<std::pair<double, double>> probes;  // (x, f(x))
    std::string note;
};

// Probes f at x = +-2^k, k = 3..9. Consistent iff the tail moves monotonically
// toward the claim and the final probe passes the threshold (|f| > 1e3 for
// divergence, |f - L| < 1e-3 for a limit).
AsymptoticReport verify_asymptotics(const TSFunction& f, const AsymptoticClaim& claim);

enum class WitnessSide { positive, negative };
enum class WitnessSign { to_plus_inf, to_minus_inf };

struct DivergenceWitness {
    enum class Mode { diverging, limit_zero } mode = Mode::diverging;
    std::vector<std::pair<double, double>> points;  // (x_j, c'(x_j)), |c'| monotone
};

// Witness sequences at the analytic extremal loci of the oscillating
// catalogue entries: points where the phase hits a multiple of pi, so the
// leading cosine is +-1. For c_p00 and c_e2 the negative side instead
// witnesses the derivative converging to zero.
DivergenceWitness divergence_witnesses(const std::string& name, int count, WitnessSide side,
                                       WitnessSign sign,
                                       const nlohmann::json& params = nlohmann::json::object());

// Rebuild a function from its serialized spec (variants expr | catalogue | rotate).
TSFunction from_spec_json(const nlohmann::json& spec);

}  // namespace reebstrip
