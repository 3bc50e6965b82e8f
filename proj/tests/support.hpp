#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "reebstrip/function.hpp"

namespace testsupport {

// splitmix64-based uniform doubles; reproducible across platforms
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}

// Test-only backing with supplied value/derivative lambdas; used to exercise
// plateau and piecewise cases the expression grammar cannot produce.
class LambdaBacking final : public reebstrip::FunctionBacking {
public:
    using JetFn = std::function<reebstrip::Jet2(double)>;
    explicit LambdaBacking(JetFn fn) : fn_(std::move(fn)) {}
    reebstrip::Jet2 jet(double x) const override { return fn_(x); }
    nlohmann::json spec_json() const override { return {{"variant", "test-lambda"}}; }
    std::string describe() const override { return "test-lambda"; }

private:
    JetFn fn_;
};

inline reebstrip::TSFunction lambda_fn(LambdaBacking::JetFn fn) {
    return reebstrip::TSFunction(std::make_shared<LambdaBacking>(std::move(fn)));
}

// C^2 plateau: constant `level` on [-1, 1], cubic flanks outside whose
// derivative signs are `left` and `right` (each +1 or -1).
inline reebstrip::TSFunction plateau_fn(double level, int left, int right) {
    return lambda_fn([=](double x) -> reebstrip::Jet2 {
        if (x < -1.0) {
            const double u = x + 1.0;  // < 0
            return {level + left * u * u * u / 3.0, left * u * u, 2.0 * left * u, false};
        }
        if (x > 1.0) {
            const double u = x - 1.0;
            return {level + right * u * u * u / 3.0, right * u * u, 2.0 * right * u, false};
        }
        return {level, 0.0, 0.0, false};
    });
}

}  // namespace testsupport
