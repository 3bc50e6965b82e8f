#include "reebstrip/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <format>
#include <numbers>
#include <vector>

namespace reebstrip {

namespace {

ExprPtr mk(ExprOp op, ExprPtr a = nullptr, ExprPtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

ExprPtr mk_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprOp::constant;
    n->value = v;
    return n;
}

// ---------------------------------------------------------------- lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind;
    size_t offset;
    double num = 0.0;
    std::string text;
    bool integral = false;  // literal had no '.' or exponent part
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const size_t start = pos_;
        if (pos_ >= s_.size()) return {Tok::end, start};
        const char c = s_[pos_];
        switch (c) {
            case '+': ++pos_; return {Tok::plus, start};
            case '-': ++pos_; return {Tok::minus, start};
            case '*': ++pos_; return {Tok::star, start};
            case '/': ++pos_; return {Tok::slash, start};
            case '^': ++pos_; return {Tok::caret, start};
            case '(': ++pos_; return {Tok::lparen, start};
            case ')': ++pos_; return {Tok::rparen, start};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            Token t{Tok::ident, start};
            t.text = s_.substr(start, pos_ - start);
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

private:
    Token lex_number(size_t start) {
        bool integral = true;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            integral = false;
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            size_t save = pos_;
            ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                integral = false;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            } else {
                pos_ = save;  // the 'e' belongs to an identifier or is stray
            }
        }
        Token t{Tok::number, start};
        t.text = s_.substr(start, pos_ - start);
        t.integral = integral;
        double val = 0.0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), val);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            throw ParseError("malformed number '" + t.text + "'", start);
        t.num = val;
        return t;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

// --------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) { advance(); }

    ExprPtr run() {
        ExprPtr e = expr();
        if (cur_.kind != Tok::end) throw ParseError("trailing input", cur_.offset);
        return e;
    }

private:
    void advance() { cur_ = lex_.next(); }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
            const bool plus = cur_.kind == Tok::plus;
            advance();
            lhs = mk(plus ? ExprOp::add : ExprOp::sub, lhs, term());
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
            const bool star = cur_.kind == Tok::star;
            advance();
            lhs = mk(star ? ExprOp::mul : ExprOp::div, lhs, unary());
        }
        return lhs;
    }

    ExprPtr unary() {
        if (cur_.kind == Tok::minus) {
            advance();
            ExprPtr operand = unary();
            // Fold "-<literal>" into a negative constant so printing round-trips.
            if (operand->op == ExprOp::constant && !operand->a)
                return mk_const(-operand->value);
            return mk(ExprOp::neg, operand);
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        while (cur_.kind == Tok::caret) {
            const size_t caret_off = cur_.offset;
            advance();
            bool negate = false;
            if (cur_.kind == Tok::minus) {
                negate = true;
                advance();
            }
            if (cur_.kind != Tok::number || !cur_.integral)
                throw ParseError("exponent must be an integer literal",
                                 cur_.kind == Tok::end ? caret_off + 1 : cur_.offset);
            long long n = static_cast<long long>(cur_.num);
            if (static_cast<double>(n) != cur_.num)
                throw ParseError("exponent out of integer range", cur_.offset);
            advance();
            auto node = std::make_shared<ExprNode>();
            node->op = ExprOp::powi;
            node->exponent = negate ? -n : n;
            node->a = base;
            base = node;
        }
        return base;
    }

    ExprPtr atom() {
        switch (cur_.kind) {
            case Tok::number: {
                double v = cur_.num;
                advance();
                return mk_const(v);
            }
            case Tok::lparen: {
                advance();
                ExprPtr e = expr();
                if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.offset);
                advance();
                return e;
            }
            case Tok::ident: {
                const std::string name = cur_.text;
                const size_t off = cur_.offset;
                advance();
                if (name == "x") return mk(ExprOp::variable);
                if (name == "pi") return mk(ExprOp::pi_const);
                if (name == "e") return mk(ExprOp::e_const);
                ExprOp fn;
                if (name == "sin") fn = ExprOp::fn_sin;
                else if (name == "cos") fn = ExprOp::fn_cos;
                else if (name == "exp") fn = ExprOp::fn_exp;
                else if (name == "sqrt") fn = ExprOp::fn_sqrt;
                else if (name == "atan") fn = ExprOp::fn_atan;
                else throw ParseError("unknown identifier '" + name + "'", off);
                if (cur_.kind != Tok::lparen)
                    throw ParseError("expected '(' after function '" + name + "'", cur_.offset);
                advance();
                ExprPtr arg = expr();
                if (cur_.kind != Tok::rparen) throw ParseError("expected ')'", cur_.offset);
                advance();
                return mk(fn, arg);
            }
            case Tok::end: throw ParseError("unexpected end of input", cur_.offset);
            default: throw ParseError("unexpected token", cur_.offset);
        }
    }

    Lexer lex_;
    Token cur_{Tok::end, 0};
};

// -------------------------------------------------------------- printer

// Precedence for parenthesization. Higher binds tighter.
int prec(ExprOp op) {
    switch (op) {
        case ExprOp::add:
        case ExprOp::sub: return 1;
        case ExprOp::mul:
        case ExprOp::div: return 2;
        case ExprOp::neg: return 3;
        case ExprOp::powi: return 4;
        default: return 5;
    }
}

std::string fmt_double(double v) { return std::format("{}", v); }

void print_node(const ExprNode& n, std::string& out);

void print_child(const ExprNode& child, int min_prec, std::string& out) {
    const bool parens = prec(child.op) < min_prec ||
                        (child.op == ExprOp::constant && child.value < 0.0 && min_prec > 1);
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.op) {
        case ExprOp::constant: out += fmt_double(n.value); return;
        case ExprOp::variable: out += 'x'; return;
        case ExprOp::pi_const: out += "pi"; return;
        case ExprOp::e_const: out += 'e'; return;
        case ExprOp::add:
            print_child(*n.a, 1, out);
            out += '+';
            print_child(*n.b, 2, out);
            return;
        case ExprOp::sub:
            print_child(*n.a, 1, out);
            out += '-';
            print_child(*n.b, 2, out);
            return;
        case ExprOp::mul:
            print_child(*n.a, 2, out);
            out += '*';
            print_child(*n.b, 3, out);
            return;
        case ExprOp::div:
            print_child(*n.a, 2, out);
            out += '/';
            print_child(*n.b, 3, out);
            return;
        case ExprOp::neg:
            out += '-';
            print_child(*n.a, 3, out);
            return;
        case ExprOp::powi:
            print_child(*n.a, 5, out);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case ExprOp::fn_sin: out += "sin("; break;
        case ExprOp::fn_cos: out += "cos("; break;
        case ExprOp::fn_exp: out += "exp("; break;
        case ExprOp::fn_sqrt: out += "sqrt("; break;
        case ExprOp::fn_atan: out += "atan("; break;
    }
    print_node(*n.a, out);
    out += ')';
}

// ----------------------------------------------------------- evaluation

[[noreturn]] void domain_fail(const char* what, const ExprNode& n) {
    std::string sub;
    print_node(n, sub);
    throw EvalError(std::string(what) + " in '" + sub + "'");
}

Jet2 eval_node(const ExprNode& n, double x) {
    switch (n.op) {
        case ExprOp::constant: return jet_constant(n.value);
        case ExprOp::variable: return jet_variable(x);
        case ExprOp::pi_const: return jet_constant(std::numbers::pi);
        case ExprOp::e_const: return jet_constant(std::numbers::e);
        case ExprOp::add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case ExprOp::sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case ExprOp::mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case ExprOp::div: {
            Jet2 a = eval_node(*n.a, x), b = eval_node(*n.b, x);
            if (!b.overflow && b.v == 0.0) domain_fail("division by zero", n);
            return a / b;
        }
        case ExprOp::neg: return -eval_node(*n.a, x);
        case ExprOp::powi: {
            Jet2 a = eval_node(*n.a, x);
            if (!a.overflow && a.v == 0.0 && n.exponent < 0)
                domain_fail("zero raised to a negative power", n);
            return jet_powi(a, n.exponent);
        }
        case ExprOp::fn_sin: return jet_sin(eval_node(*n.a, x));
        case ExprOp::fn_cos: return jet_cos(eval_node(*n.a, x));
        case ExprOp::fn_exp: return jet_exp(eval_node(*n.a, x));
        case ExprOp::fn_sqrt: {
            Jet2 a = eval_node(*n.a, x);
            if (!a.overflow && a.v < 0.0) domain_fail("sqrt of a negative value", n);
            return jet_sqrt(a);
        }
        case ExprOp::fn_atan: return jet_atan(eval_node(*n.a, x));
    }
    throw EvalError("corrupt expression node");
}

double eval_value(const ExprNode& n, double x) {
    switch (n.op) {
        case ExprOp::constant: return n.value;
        case ExprOp::variable: return x;
        case ExprOp::pi_const: return std::numbers::pi;
        case ExprOp::e_const: return std::numbers::e;
        case ExprOp::add: return eval_value(*n.a, x) + eval_value(*n.b, x);
        case ExprOp::sub: return eval_value(*n.a, x) - eval_value(*n.b, x);
        case ExprOp::mul: return eval_value(*n.a, x) * eval_value(*n.b, x);
        case ExprOp::div: {
            double a = eval_value(*n.a, x);
            double b = eval_value(*n.b, x);
            if (b == 0.0) domain_fail("division by zero", n);
            return a / b;
        }
        case ExprOp::neg: return -eval_value(*n.a, x);
        case ExprOp::powi: {
            double a = eval_value(*n.a, x);
            if (a == 0.0 && n.exponent < 0) domain_fail("zero raised to a negative power", n);
            return std::pow(a, static_cast<double>(n.exponent));
        }
        case ExprOp::fn_sin: return std::sin(eval_value(*n.a, x));
        case ExprOp::fn_cos: return std::cos(eval_value(*n.a, x));
        case ExprOp::fn_exp: {
            double a = eval_value(*n.a, x);
            if (a > kExpOverflowArg) return std::numeric_limits<double>::infinity();
            return std::exp(a);
        }
        case ExprOp::fn_sqrt: {
            double a = eval_value(*n.a, x);
            if (a < 0.0) domain_fail("sqrt of a negative value", n);
            return std::sqrt(a);
        }
        case ExprOp::fn_atan: return std::atan(eval_value(*n.a, x));
    }
    throw EvalError("corrupt expression node");
}

// ------------------------------------------------------------------ json

const char* op_name(ExprOp op) {
    switch (op) {
        case ExprOp::constant: return "const";
        case ExprOp::variable: return "var";
        case ExprOp::pi_const: return "pi";
        case ExprOp::e_const: return "e";
        case ExprOp::add: return "add";
        case ExprOp::sub: return "sub";
        case ExprOp::mul: return "mul";
        case ExprOp::div: return "div";
        case ExprOp::neg: return "neg";
        case ExprOp::powi: return "pow";
        case ExprOp::fn_sin: return "sin";
        case ExprOp::fn_cos: return "cos";
        case ExprOp::fn_exp: return "exp";
        case ExprOp::fn_sqrt: return "sqrt";
        case ExprOp::fn_atan: return "atan";
    }
    return "?";
}

nlohmann::json node_to_json(const ExprNode& n) {
    nlohmann::json j;
    j["op"] = op_name(n.op);
    if (n.op == ExprOp::constant) j["value"] = n.value;
    if (n.op == ExprOp::powi) j["n"] = n.exponent;
    if (n.a) {
        nlohmann::json args = nlohmann::json::array();
        args.push_back(node_to_json(*n.a));
        if (n.b) args.push_back(node_to_json(*n.b));
        j["args"] = std::move(args);
    }
    return j;
}

ExprPtr node_from_json(const nlohmann::json& j) {
    const std::string op = j.at("op").get<std::string>();
    auto arg = [&](size_t i) { return node_from_json(j.at("args").at(i)); };
    if (op == "const") return mk_const(j.at("value").get<double>());
    if (op == "var") return mk(ExprOp::variable);
    if (op == "pi") return mk(ExprOp::pi_const);
    if (op == "e") return mk(ExprOp::e_const);
    if (op == "add") return mk(ExprOp::add, arg(0), arg(1));
    if (op == "sub") return mk(ExprOp::sub, arg(0), arg(1));
    if (op == "mul") return mk(ExprOp::mul, arg(0), arg(1));
    if (op == "div") return mk(ExprOp::div, arg(0), arg(1));
    if (op == "neg") return mk(ExprOp::neg, arg(0));
    if (op == "pow") {
        auto n = std::make_shared<ExprNode>();
        n->op = ExprOp::powi;
        n->exponent = j.at("n").get<long long>();
        n->a = arg(0);
        return n;
    }
    if (op == "sin") return mk(ExprOp::fn_sin, arg(0));
    if (op == "cos") return mk(ExprOp::fn_cos, arg(0));
    if (op == "exp") return mk(ExprOp::fn_exp, arg(0));
    if (op == "sqrt") return mk(ExprOp::fn_sqrt, arg(0));
    if (op == "atan") return mk(ExprOp::fn_atan, arg(0));
    throw EvalError("unknown expression op '" + op + "' in JSON");
}

bool same_node(const ExprNode& a, const ExprNode& b) {
    if (a.op != b.op) return false;
    if (a.op == ExprOp::constant && a.value != b.value) return false;
    if (a.op == ExprOp::powi && a.exponent != b.exponent) return false;
    if (static_cast<bool>(a.a) != static_cast<bool>(b.a)) return false;
    if (static_cast<bool>(a.b) != static_cast<bool>(b.b)) return false;
    if (a.a && !same_node(*a.a, *b.a)) return false;
    if (a.b && !same_node(*a.b, *b.b)) return false;
    return true;
}

}  // namespace

Jet2 Expr::eval_jet2(double x) const { return eval_node(*root_, x); }
double Expr::eval(double x) const { return eval_value(*root_, x); }

std::string Expr::print() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

nlohmann::json Expr::to_json() const { return node_to_json(*root_); }
Expr Expr::from_json(const nlohmann::json& j) { return Expr(node_from_json(j)); }

bool Expr::same_structure(const Expr& other) const {
    return root_ && other.root_ && same_node(*root_, *other.root_);
}

Expr parse(const std::string& text) {
    if (text.empty()) throw ParseError("empty input", 0);
    return Expr(Parser(text).run());
}

Expr make_const(double v) { return Expr(mk_const(v)); }
Expr make_var() { return Expr(mk(ExprOp::variable)); }
Expr make_pi() { return Expr(mk(ExprOp::pi_const)); }
Expr make_e() { return Expr(mk(ExprOp::e_const)); }
Expr make_add(Expr a, Expr b) { return Expr(mk(ExprOp::add, a.node(), b.node())); }
Expr make_sub(Expr a, Expr b) { return Expr(mk(ExprOp::sub, a.node(), b.node())); }
Expr make_mul(Expr a, Expr b) { return Expr(mk(ExprOp::mul, a.node(), b.node())); }
Expr make_div(Expr a, Expr b) { return Expr(mk(ExprOp::div, a.node(), b.node())); }
Expr make_neg(Expr a) { return Expr(mk(ExprOp::neg, a.node())); }

Expr make_powi(Expr a, long long n) {
    auto node = std::make_shared<ExprNode>();
    node->op = ExprOp::powi;
    node->exponent = n;
    node->a = a.node();
    return Expr(node);
}

Expr make_fn(ExprOp fn, Expr a) { return Expr(mk(fn, a.node())); }

}  // namespace reebstrip
