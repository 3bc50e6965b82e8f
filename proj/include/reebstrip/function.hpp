#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"
#include "reebstrip/expr.hpp"
#include "reebstrip/jet.hpp"
#include "reebstrip/tolerances.hpp"

namespace reebstrip {

struct CriticalSet;

// Behind every TSFunction sits a backing: a parsed expression or a
// construction (catalogue entry, rotated graph). Evaluation is deterministic:
// the same backing and input always produce bit-identical output.
class FunctionBacking {
public:
    virtual ~FunctionBacking() = default;
    virtual Jet2 jet(double x) const = 0;
    virtual double value(double x) const { return jet(x).v; }
    virtual nlohmann::json spec_json() const = 0;
    virtual std::string describe() const = 0;
};

class ExprBacking final : public FunctionBacking {
public:
    explicit ExprBacking(Expr e) : expr_(std::move(e)) {}
    Jet2 jet(double x) const override { return expr_.eval_jet2(x); }
    double value(double x) const override { return expr_.eval(x); }
    nlohmann::json spec_json() const override {
        return {{"variant", "expr"}, {"text", expr_.print()}};
    }
    std::string describe() const override { return expr_.print(); }
    const Expr& expr() const { return expr_; }

private:
    Expr expr_;
};

// A function on the line with tame singularities. Value-semantic handle over
// a shared immutable backing, with a memoized critical set per window.
class TSFunction {
public:
    TSFunction() = default;
    explicit TSFunction(std::shared_ptr<const FunctionBacking> b)
        : backing_(std::move(b)), cache_(std::make_shared<Cache>()) {}
    explicit TSFunction(Expr e) : TSFunction(std::make_shared<ExprBacking>(std::move(e))) {}

    bool valid() const { return backing_ != nullptr; }
    Jet2 jet(double x) const { return backing_->jet(x); }
    double value(double x) const { return backing_->value(x); }
    nlohmann::json spec_json() const { return backing_->spec_json(); }
    std::string describe() const { return backing_->describe(); }
    const FunctionBacking& backing() const { return *backing_; }

    // Memoized find_critical_set; see critical.hpp for the computation.
    std::shared_ptr<const CriticalSet> critical_set(const Window& w, const Tolerances& tol) const;

private:
    struct Cache {
        std::mutex m;
        std::map<std::pair<double, double>, std::shared_ptr<const CriticalSet>> by_window;
    };
    std::shared_ptr<const FunctionBacking> backing_;
    std::shared_ptr<Cache> cache_;
};

inline TSFunction from_expr_text(const std::string& text) { return TSFunction(parse(text)); }

}  // namespace reebstrip
