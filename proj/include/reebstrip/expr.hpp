#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "reebstrip/jet.hpp"

namespace reebstrip {

enum class ExprOp {
    constant,   // numeric literal
    variable,   // "x"
    pi_const,
    e_const,
    add,
    sub,
    mul,
    div,
    neg,
    powi,       // integer exponent in `exponent`
    fn_sin,
    fn_cos,
    fn_exp,
    fn_sqrt,
    fn_atan,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprOp op;
    double value = 0.0;       // constant
    long long exponent = 0;   // powi
    ExprPtr a, b;             // children (a for unary, a+b for binary)
};

// Immutable parsed expression in one variable. Copies share the tree.
class Expr {
public:
    Expr() = default;
    explicit Expr(ExprPtr root) : root_(std::move(root)) {}

    const ExprNode& root() const { return *root_; }
    ExprPtr node() const { return root_; }
    bool valid() const { return root_ != nullptr; }

    Jet2 eval_jet2(double x) const;
    double eval(double x) const;  // value-only path, same domain rules

    std::string print() const;
    nlohmann::json to_json() const;
    static Expr from_json(const nlohmann::json& j);

    bool same_structure(const Expr& other) const;

private:
    ExprPtr root_;
};

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

struct EvalError : std::runtime_error {
    explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Grammar: usual precedence (^ above unary minus above * / above + -),
// left associative, parentheses. Identifier "x" is the variable; pi and e
// are named constants; sin cos exp sqrt atan are the unary functions.
// Exponents of ^ must be integer literals (optionally negated).
Expr parse(const std::string& text);

// Node constructors for programmatic composition.
Expr make_const(double v);
Expr make_var();
Expr make_pi();
Expr make_e();
Expr make_add(Expr a, Expr b);
Expr make_sub(Expr a, Expr b);
Expr make_mul(Expr a, Expr b);
Expr make_div(Expr a, Expr b);
Expr make_neg(Expr a);
Expr make_powi(Expr a, long long n);
Expr make_fn(ExprOp fn, Expr a);

}  // namespace reebstrip
