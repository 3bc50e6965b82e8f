#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "reebstrip/strip.hpp"

namespace reebstrip {

enum class Verdict { holds, fails, window_limited_holds, undetermined };

const char* to_string(Verdict v);

struct StabilityReport {
    Verdict morse = Verdict::undetermined;
    Verdict critical_values_injective = Verdict::undetermined;
    Verdict stable_sufficient = Verdict::undetermined;
    Verdict strongly_stable = Verdict::undetermined;
    Verdict infinitesimally_stable = Verdict::undetermined;
    std::vector<std::string> evidence;
};

// Classify the induced height function on X_{m,c1,c2} against the quoted
// Morse-stability criteria. Critical points come from Theorem-2 enumeration:
// (c_i(x), x, 0) for x in S(c_i). Properness checks are window-limited
// surrogates and never report a plain `holds` unless vacuous.
StabilityReport classify_stability(const StripRegion& region, const Tolerances& tol);

struct MorseCheck {
    bool is_morse = false;
    std::vector<std::string> witnesses;
};

// True iff every point item of S(f) on the window is nondegenerate and no
// interval_flat items exist.
MorseCheck morse_check(const TSFunction& f, const Window& window, const Tolerances& tol);

nlohmann::json to_json(const StabilityReport& r);

}  // namespace reebstrip
