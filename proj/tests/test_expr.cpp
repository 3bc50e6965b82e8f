#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "reebstrip/constructions.hpp"
#include "reebstrip/expr.hpp"
#include "support.hpp"

using namespace reebstrip;
using testsupport::Rng;

namespace {

// paper closed forms used as independent checks on the jets
double d_c_p0(double x) {  // p(x) = x^2 + 1
    const double p = x * x + 1.0, dp = 2.0 * x;
    const double e = std::exp(x * x);
    return (2.0 * x * e * std::cos(e) * p - (2.0 + std::sin(e)) * dp) / (p * p);
}

double d_c_p00(double x) {
    const double p = x * x + 1.0, dp = 2.0 * x;
    const double e = std::exp(x);
    return (e * std::cos(e) * p - (2.0 + std::sin(e)) * dp) / (p * p);
}

double d_c_e_p1_p2(double x, double p1, double p2) {
    const double e = std::exp(x);
    return (p1 - p2) * e / ((e + 1.0) * (e + 1.0));
}

double d_c_e1(double x) {
    const double e4 = std::exp(x * x * x * x), e2 = std::exp(x * x);
    return (4.0 * x * x * x * e4 * std::cos(e4) * e2 - 2.0 * x * (2.0 + std::sin(e4)) * e2) /
           (e2 * e2);
}

double d_c_e2(double x) {
    const double e3 = std::exp(x * x * x), e2 = std::exp(x * x);
    return (3.0 * x * x * e3 * std::cos(e3) * e2 - 2.0 * x * (2.0 + std::sin(e3)) * e2) /
           (e2 * e2);
}

}  // namespace

TEST_CASE("parse shapes and precedence") {
    Expr e = parse("sin(x)");
    CHECK(e.root().op == ExprOp::fn_sin);
    CHECK(e.root().a->op == ExprOp::variable);

    Expr c = parse("(2+sin(exp(x^2)))/(x^2+1)");
    CHECK(c.root().op == ExprOp::div);
    CHECK(c.root().a->op == ExprOp::add);
    CHECK(c.root().b->op == ExprOp::add);

    // ^ binds above unary minus: -x^2 == -(x^2)
    Expr neg = parse("-x^2");
    CHECK(neg.root().op == ExprOp::neg);
    CHECK(neg.root().a->op == ExprOp::powi);
    CHECK(neg.eval(2.0) == -4.0);

    CHECK(parse("2-3-1").eval(0.0) == -2.0);   // left associative
    CHECK(parse("8/4/2").eval(0.0) == 1.0);
    CHECK(parse("2+3*4").eval(0.0) == 14.0);
    CHECK(parse("pi").eval(0.0) == doctest::Approx(std::numbers::pi));
    CHECK(parse("e").eval(0.0) == doctest::Approx(std::numbers::e));
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse(""), ParseError);
    try {
        parse("x^");
        FAIL("expected error");
    } catch (const ParseError& err) {
        CHECK(err.offset == 2);
    }
    try {
        parse("sin(y)");
        FAIL("expected error");
    } catch (const ParseError& err) {
        CHECK(err.offset == 4);
        CHECK(std::string(err.what()).find("unknown identifier") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("x^2.5"), ParseError);  // integer exponents only
    CHECK_THROWS_AS(parse("sin x"), ParseError);
    CHECK_THROWS_AS(parse("(x"), ParseError);
}

TEST_CASE("known jets") {
    const Jet2 s0 = parse("sin(x)").eval_jet2(0.0);
    CHECK(s0.v == 0.0);
    CHECK(s0.d1 == 1.0);
    CHECK(s0.d2 == 0.0);

    // c_{e,p1,p2} at 0 with (p1,p2) = (0,1): d1 = (p1-p2)/4
    const Jet2 ce = parse("(0*exp(x)+1)/(exp(x)+1)").eval_jet2(0.0);
    CHECK(ce.d1 == doctest::Approx(-0.25).epsilon(1e-12));

    // Prop-1 closed form at x = 1
    const Jet2 cp = parse("(2+sin(exp(x^2)))/(x^2+1)").eval_jet2(1.0);
    CHECK(std::abs(cp.d1 - d_c_p0(1.0)) <= 1e-10 * std::abs(d_c_p0(1.0)));
}

TEST_CASE("domain errors name the offending node") {
    CHECK_THROWS_WITH_AS(parse("sqrt(x)").eval_jet2(-1.0),
                         doctest::Contains("sqrt"), EvalError);
    CHECK_THROWS_WITH_AS(parse("1/x").eval_jet2(0.0), doctest::Contains("division"), EvalError);
    CHECK_THROWS_AS(parse("x^-1").eval_jet2(0.0), EvalError);
}

TEST_CASE("exp overflow propagates as a flagged jet") {
    const Jet2 j = parse("exp(x^2)").eval_jet2(27.0);  // 729 > 700
    CHECK(j.overflow);
    const Jet2 k = parse("exp(x^2)+1").eval_jet2(27.0);
    CHECK(k.overflow);
    const Jet2 ok = parse("exp(x^2)").eval_jet2(26.0);  // 676 < 700
    CHECK(!ok.overflow);
}

TEST_CASE("print/parse round-trip is structural") {
    const std::vector<std::string> cases = {
        "sin(x)",
        "x^2+1",
        "2.5",
        "(2+sin(exp(x^2)))/(x^2+1)",
        "-x^2",
        "3*-2",
        "sqrt(x^2+4)/2",
        "atan(x)-pi*e",
        "exp(-x^2)*sin(x)",
        "x^-2",
        "(-x)^3",
        "1-(2-3)",
    };
    for (const auto& text : cases) {
        Expr e = parse(text);
        Expr back = parse(e.print());
        CHECK_MESSAGE(e.same_structure(back), "round-trip failed for: ", text);
    }
    CHECK(parse("2.5").print() == "2.5");
    CHECK(parse("sin(x)").print() == "sin(x)");
}

TEST_CASE("expr JSON round-trip") {
    Expr e = parse("(2+sin(exp(x^2)))/(x^2+1)");
    Expr back = Expr::from_json(e.to_json());
    CHECK(e.same_structure(back));
    CHECK(e.to_json()["op"] == "div");
}

TEST_CASE("jets match central finite differences on the catalogue") {
    // per-entry windows keep the phase well conditioned for differencing
    struct Entry {
        const char* name;
        double half_width;
    };
    const std::vector<Entry> entries = {
        {"sin", 3.0},      {"gauss_sin", 3.0}, {"runge", 3.0},  {"c_H_plus_inf_r", 3.0},
        {"c_H_p1_p2", 3.0}, {"c_e_p1_p2", 3.0}, {"c_p0", 1.5},  {"c_p00", 3.0},
        {"c_e1", 1.0},     {"c_e2", 1.0},
    };
    nlohmann::json params = {{"p1", 0.0}, {"p2", 1.0}, {"r", 1.0}, {"a1", 2.0}, {"a2", 0.5}};
    Rng rng(20240817);
    for (const auto& entry : entries) {
        TSFunction f = catalogue(entry.name, params);
        for (int i = 0; i < 1000; ++i) {
            const double x = rng.uniform(-entry.half_width, entry.half_width);
            const Jet2 j = f.jet(x);
            const double fd =
                testsupport::central_diff([&](double s) { return f.value(s); }, x);
            CHECK_MESSAGE(std::abs(j.d1 - fd) <= 1e-6 * (1.0 + std::abs(j.d1)),
                          entry.name, " at x=", x, ": jet ", j.d1, " vs fd ", fd);
        }
    }
}

TEST_CASE("closed-form derivative identities at 1000 points") {
    Rng rng(7);
    TSFunction c_p0 = catalogue("c_p0");
    TSFunction c_p00 = catalogue("c_p00");
    TSFunction c_e = catalogue("c_e_p1_p2", {{"p1", 0.25}, {"p2", 2.0}});
    TSFunction c_e1 = catalogue("c_e1");
    TSFunction c_e2 = catalogue("c_e2");
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-3.0, 3.0);
        auto rel_match = [](double got, double want) {
            return std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want));
        };
        CHECK(rel_match(c_p0.jet(x).d1, d_c_p0(x)));
        CHECK(rel_match(c_p00.jet(x).d1, d_c_p00(x)));
        CHECK(rel_match(c_e.jet(x).d1, d_c_e_p1_p2(x, 0.25, 2.0)));
        CHECK(rel_match(c_e1.jet(x).d1, d_c_e1(x)));
        CHECK(rel_match(c_e2.jet(x).d1, d_c_e2(x)));
    }
}
