#include "reebstrip/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace reebstrip {

namespace {

Expr x() { return make_var(); }
Expr num(double v) { return make_const(v); }

Expr parse_poly_param(const nlohmann::json& params, const char* key, const char* fallback) {
    std::string text = fallback;
    if (params.contains(key)) text = params.at(key).get<std::string>();
    Expr p = parse(text);
    // the denominator must stay positive; sample a wide lattice
    for (int i = 0; i <= 2000; ++i) {
        const double s = -50.0 + 0.05 * i;
        if (p.eval(s) <= 0.0)
            throw ConstructionError("parameter p is not positive at x = " + std::to_string(s));
    }
    return p;
}

double num_param(const nlohmann::json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    return params.at(key).get<double>();
}

double require_param(const nlohmann::json& params, const char* key) {
    if (!params.contains(key)) throw ConstructionError(std::string("missing parameter ") + key);
    return params.at(key).get<double>();
}

Expr two_plus_sin_exp(Expr phase_arg) {
    return make_add(num(2.0), make_fn(ExprOp::fn_sin, make_fn(ExprOp::fn_exp, std::move(phase_arg))));
}

Expr catalogue_expr(const std::string& name, const nlohmann::json& params) {
    if (name == "sin") return make_fn(ExprOp::fn_sin, x());
    if (name == "const") return num(num_param(params, "k", 0.0));
    if (name == "affine")
        return make_add(make_mul(num(num_param(params, "k", 1.0)), x()),
                        num(num_param(params, "b", 0.0)));
    if (name == "gauss_sin")
        return make_mul(make_fn(ExprOp::fn_exp, make_neg(make_powi(x(), 2))),
                        make_fn(ExprOp::fn_sin, x()));
    if (name == "runge") {
        const double a1 = num_param(params, "a1", 1.0);
        const double a2 = num_param(params, "a2", 0.0);
        if (!(a1 > 0.0)) throw ConstructionError("runge needs a1 > 0");
        if (a2 < 0.0) throw ConstructionError("runge needs a2 >= 0");
        return make_add(make_div(num(a1), make_add(make_powi(x(), 2), num(1.0))), num(a2));
    }
    if (name == "c_H_plus_inf_r") {
        const double r = num_param(params, "r", 1.0);
        if (!(r > 0.0)) throw ConstructionError("c_H_plus_inf_r needs r > 0");
        return make_fn(ExprOp::fn_sqrt, make_add(num(1.0), make_mul(num(r), make_powi(x(), 2))));
    }
    if (name == "c_H_p1_p2") {
        const double p1 = require_param(params, "p1");
        const double p2 = require_param(params, "p2");
        if (!(p2 > 0.0)) throw ConstructionError("c_H_p1_p2 needs p2 > 0");
        Expr root = make_fn(ExprOp::fn_sqrt, make_add(make_powi(x(), 2), num(4.0 * p2)));
        return make_add(num(p1), make_div(make_add(x(), std::move(root)), num(2.0)));
    }
    if (name == "c_e_p1_p2") {
        const double p1 = require_param(params, "p1");
        const double p2 = require_param(params, "p2");
        if (p1 == p2) throw ConstructionError("c_e_p1_p2 needs p1 != p2");
        Expr ex = make_fn(ExprOp::fn_exp, x());
        return make_div(make_add(make_mul(num(p1), ex), num(p2)), make_add(ex, num(1.0)));
    }
    if (name == "c_p0")
        return make_div(two_plus_sin_exp(make_powi(x(), 2)), parse_poly_param(params, "p", "x^2+1"));
    if (name == "c_p00")
        return make_div(two_plus_sin_exp(x()), parse_poly_param(params, "p", "x^2+1"));
    if (name == "c_e1")
        return make_div(two_plus_sin_exp(make_powi(x(), 4)),
                        make_fn(ExprOp::fn_exp, make_powi(x(), 2)));
    if (name == "c_e2")
        return make_div(two_plus_sin_exp(make_powi(x(), 3)),
                        make_fn(ExprOp::fn_exp, make_powi(x(), 2)));
    throw ConstructionError("unknown catalogue entry '" + name + "'");
}

class CatalogueBacking final : public FunctionBacking {
public:
    CatalogueBacking(std::string name, nlohmann::json params, Expr e)
        : name_(std::move(name)), params_(std::move(params)), expr_(std::move(e)) {}
    Jet2 jet(double v) const override { return expr_.eval_jet2(v); }
    double value(double v) const override { return expr_.eval(v); }
    nlohmann::json spec_json() const override {
        return {{"variant", "catalogue"}, {"name", name_}, {"params", params_}};
    }
    std::string describe() const override { return name_; }
    const Expr& expr() const { return expr_; }

private:
    std::string name_;
    nlohmann::json params_;
    Expr expr_;
};

}  // namespace

TSFunction catalogue(const std::string& name, const nlohmann::json& params) {
    Expr e = catalogue_expr(name, params);
    return TSFunction(std::make_shared<CatalogueBacking>(name, params, std::move(e)));
}

// ------------------------------------------------------------------ rotation

namespace {

class RotateBacking final : public FunctionBacking {
public:
    RotateBacking(TSFunction c0, double a_c, double a_cm, double a_cM, Window preimage)
        : c0_(std::move(c0)), a_c_(a_c), a_cm_(a_cm), a_cM_(a_cM), preimage_(preimage) {
        theta_ = std::atan(a_c);
        sin_t_ = std::sin(theta_);
        cos_t_ = std::cos(theta_);
        const int n = 4096;
        xs_.resize(n);
        us_.resize(n);
        const double step = preimage.length() / (n - 1);
        for (int i = 0; i < n; ++i) {
            xs_[i] = preimage.lo + step * i;
            us_[i] = u_of(xs_[i]);
            if (i > 0 && us_[i] <= us_[i - 1])
                throw ConstructionError("rotated abscissa is not increasing near x = " +
                                        std::to_string(xs_[i]) + " (hypothesis violated)");
        }
    }

    double u_of(double x) const { return c0_.value(x) * sin_t_ + x * cos_t_; }

    double x_of(double u) const {
        if (u < us_.front() || u > us_.back())
            throw EvalError("rotated function queried outside its mapped window");
        auto it = std::upper_bound(us_.begin(), us_.end(), u);
        size_t hi_i = std::min(us_.size() - 1, static_cast<size_t>(it - us_.begin()));
        size_t lo_i = hi_i == 0 ? 0 : hi_i - 1;
        double a = xs_[lo_i], b = xs_[hi_i];
        const double tol = 1e-12 * (1.0 + std::abs(u));
        for (int k = 0; k < 100 && (b - a) > tol; ++k) {
            const double mid = 0.5 * (a + b);
            (u_of(mid) < u ? a : b) = mid;
        }
        return 0.5 * (a + b);
    }

    Jet2 jet(double u) const override {
        const double px = x_of(u);
        const Jet2 j0 = c0_.jet(px);
        if (j0.overflow) return jet_overflow();
        const double up = j0.d1 * sin_t_ + cos_t_;  // du/dx > 0 by hypothesis
        Jet2 out;
        out.v = j0.v * cos_t_ - px * sin_t_;
        out.d1 = (j0.d1 * cos_t_ - sin_t_) / up;
        out.d2 = j0.d2 / (up * up * up);
        return out;
    }

    double value(double u) const override {
        const double px = x_of(u);
        return c0_.value(px) * cos_t_ - px * sin_t_;
    }

    nlohmann::json spec_json() const override {
        return {{"variant", "rotate"},
                {"c0", c0_.spec_json()},
                {"a_c", a_c_},
                {"bounds", {a_cm_, a_cM_}},
                {"window", {preimage_.lo, preimage_.hi}}};
    }
    std::string describe() const override {
        return "rotate(" + c0_.describe() + ", a_c=" + std::to_string(a_c_) + ")";
    }

    Window mapped_window() const { return {us_.front(), us_.back()}; }

private:
    TSFunction c0_;
    double a_c_, a_cm_, a_cM_;
    Window preimage_;
    double theta_, sin_t_, cos_t_;
    std::vector<double> xs_, us_;
};

}  // namespace

TSFunction rotate_graph(const TSFunction& c0, double a_c, double a_cm, double a_cM,
                        const Window& preimage_window) {
    if (!(a_cm > 0.0 && a_cM > a_cm))
        throw ConstructionError("need 0 < a_cm < a_cM");
    if (!(a_c > 0.0 && a_c < a_cM))
        throw ConstructionError("need 0 < a_c < a_cM");

    // Slope hypothesis on a generous window. The lower bound is the one the
    // rotated set actually needs to stay a graph: c0' >= -1/a_c keeps
    // u(x) = c0(x) sin(theta) + x cos(theta) monotone. Equality at isolated
    // points is tolerated (vertical tangents of the rotated curve).
    const double margin = 0.25 * preimage_window.length();
    const Window check{preimage_window.lo - margin, preimage_window.hi + margin};
    const int n = 8192;
    for (int i = 0; i < n; ++i) {
        const double s = check.lo + check.length() * i / (n - 1);
        const Jet2 j = c0.jet(s);
        if (j.overflow || !std::isfinite(j.v))
            throw ConstructionError("c0 unbounded or overflowing at x = " + std::to_string(s));
        if (j.d1 > a_cm + 1e-9)
            throw ConstructionError("c0' = " + std::to_string(j.d1) + " at x = " +
                                    std::to_string(s) + " exceeds a_cm");
        if (j.d1 < -1.0 / a_c - 1e-9)
            throw ConstructionError("c0' = " + std::to_string(j.d1) + " at x = " +
                                    std::to_string(s) + " breaks monotonicity of the rotation");
    }
    return TSFunction(std::make_shared<RotateBacking>(c0, a_c, a_cm, a_cM, preimage_window));
}

// ----------------------------------------------------------------- pairs

namespace {

// Largest safe multiple of the oscillating part keeping c_e + lambda * osc
// strictly below the upper image bound. Deterministic in the parameters.
double image_safe_scale(const Expr& base, const Expr& osc, double upper_bound, double cap) {
    double worst = 0.0;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        const double s = -cap + 2.0 * cap * i / (n - 1);
        const double room = upper_bound - base.eval(s);
        const double o = osc.eval(s);
        if (!(room > 0.0) || !std::isfinite(o)) continue;
        worst = std::max(worst, o / room);
    }
    if (worst <= 0.0) throw ConstructionError("cannot scale oscillating part into the image");
    return 0.5 / worst;
}

TSFunction wrap(Expr e) { return TSFunction(std::move(e)); }

}  // namespace

std::pair<TSFunction, TSFunction> build_pair(const std::string& theorem,
                                             const nlohmann::json& params) {
    if (theorem == "4") {
        Expr h = catalogue_expr("c_H_plus_inf_r", params);
        Expr osc = catalogue_expr("c_p0", params);
        return {wrap(h), wrap(make_add(h, osc))};
    }
    if (theorem == "5a" || theorem == "5b" || theorem == "5c") {
        Expr h = catalogue_expr("c_H_p1_p2", params);
        Expr osc = catalogue_expr(theorem == "5c" ? "c_p00" : "c_p0", params);
        if (theorem == "5a") return {wrap(h), wrap(make_add(h, osc))};
        return {wrap(make_add(h, make_mul(num(0.5), osc))), wrap(make_add(h, osc))};
    }
    if (theorem == "6a" || theorem == "6b" || theorem == "6c") {
        const double p1 = require_param(params, "p1");
        const double p2 = require_param(params, "p2");
        Expr base = catalogue_expr("c_e_p1_p2", params);
        const bool e2 = theorem == "6c";
        Expr osc = catalogue_expr(e2 ? "c_e2" : "c_e1", {});
        // phase precision cap: e^{x^4} (resp. e^{x^3}) must stay below 2^53
        const double cap = e2 ? 3.3 : 2.4;
        const double lambda = image_safe_scale(base, osc, std::max(p1, p2), cap);
        Expr scaled = make_mul(num(lambda), osc);
        if (theorem == "6a") return {wrap(base), wrap(make_add(base, scaled))};
        return {wrap(make_add(base, make_mul(num(0.5), scaled))),
                wrap(make_add(base, scaled))};
    }
    throw ConstructionError("unknown theorem pair '" + theorem + "'");
}

// ------------------------------------------------------------- asymptotics

AsymptoticReport verify_asymptotics(const TSFunction& f, const AsymptoticClaim& claim) {
    AsymptoticReport rep;
    const double sign = claim.at_plus_inf ? 1.0 : -1.0;
    for (int k = 3; k <= 9; ++k) {
        const double s = sign * std::ldexp(1.0, k);
        try {
            const Jet2 j = f.jet(s);
            if (j.overflow || !std::isfinite(j.v)) {
                rep.reduced_confidence = true;
                continue;
            }
            rep.probes.emplace_back(s, j.v);
        } catch (const EvalError&) {
            rep.reduced_confidence = true;
        }
    }
    if (rep.probes.size() < 3) {
        rep.consistent = false;
        rep.note = "too few valid probes";
        return rep;
    }
    const double last = rep.probes.back().second;
    const double prev = rep.probes[rep.probes.size() - 2].second;
    switch (claim.kind) {
        case AsymptoticClaim::Kind::diverge_up:
            rep.consistent = last > 1e3 && last > prev;
            break;
        case AsymptoticClaim::Kind::diverge_down:
            rep.consistent = last < -1e3 && last < prev;
            break;
        case AsymptoticClaim::Kind::limit: {
            const double e_last = std::abs(last - claim.limit_value);
            const double e_prev = std::abs(prev - claim.limit_value);
            rep.consistent = e_last < 1e-3 && e_last <= e_prev;
            break;
        }
    }
    if (!rep.consistent) rep.note = "probe tail does not settle on the claim";
    return rep;
}

// --------------------------------------------------------------- witnesses

DivergenceWitness divergence_witnesses(const std::string& name, int count, WitnessSide side,
                                       WitnessSign sign, const nlohmann::json& params) {
    DivergenceWitness out;
    if (count <= 0) return out;

    const bool left_limit_case =
        (name == "c_p00" || name == "c_e2") && side == WitnessSide::negative;
    TSFunction f = catalogue(name, params);

    if (left_limit_case) {
        // Prop-4 behaviour: the derivative flattens out toward -inf.
        out.mode = DivergenceWitness::Mode::limit_zero;
        for (int k = 0; k < count; ++k) {
            const double s = -std::ldexp(1.0, k + 1);
            const Jet2 j = f.jet(s);
            if (j.overflow || !std::isfinite(j.d1)) break;
            out.points.emplace_back(s, j.d1);
        }
        return out;
    }

    // exponent of the phase: e^{x^q} with q depending on the entry
    int q;
    if (name == "c_p0") q = 2;
    else if (name == "c_p00") q = 1;
    else if (name == "c_e1") q = 4;
    else if (name == "c_e2") q = 3;
    else throw ConstructionError("no divergence witnesses for '" + name + "'");

    if ((q == 1 || q == 3) && side == WitnessSide::negative)
        throw ConstructionError("'" + name + "' has no negative-side divergence witnesses");

    const double dir = side == WitnessSide::positive ? 1.0 : -1.0;
    // the leading term carries sign(x) * cos(phase); pick the parity of j in
    // phase = j*pi so cos(j*pi) delivers the requested sign
    const bool want_positive = (sign == WitnessSign::to_plus_inf);
    const bool cos_plus = (q == 1 || q == 3) ? want_positive
                                             : (want_positive == (dir > 0.0));

    double last_mag = 0.0;
    for (long long j = cos_plus ? 2 : 1; static_cast<int>(out.points.size()) < count; j += 2) {
        const double phase = static_cast<double>(j) * std::numbers::pi;
        if (std::log(phase) <= 0.0) continue;
        const double xj = dir * std::pow(std::log(phase), 1.0 / q);
        Jet2 jet;
        try {
            jet = f.jet(xj);
        } catch (const EvalError&) {
            break;
        }
        if (jet.overflow || !std::isfinite(jet.d1)) break;  // prefix on overflow
        const bool sign_ok = want_positive ? jet.d1 > 0.0 : jet.d1 < 0.0;
        if (!sign_ok || std::abs(jet.d1) <= last_mag) continue;  // pre-asymptotic j
        last_mag = std::abs(jet.d1);
        out.points.emplace_back(xj, jet.d1);
        if (j > 4'000'000'000LL) break;
    }
    return out;
}

TSFunction from_spec_json(const nlohmann::json& spec) {
    const std::string variant = spec.at("variant").get<std::string>();
    if (variant == "expr") return TSFunction(parse(spec.at("text").get<std::string>()));
    if (variant == "catalogue")
        return catalogue(spec.at("name").get<std::string>(),
                         spec.contains("params") ? spec.at("params") : nlohmann::json::object());
    if (variant == "rotate") {
        TSFunction c0 = from_spec_json(spec.at("c0"));
        const auto& b = spec.at("bounds");
        const auto& w = spec.at("window");
        return rotate_graph(c0, spec.at("a_c").get<double>(), b.at(0).get<double>(),
                            b.at(1).get<double>(), {w.at(0).get<double>(), w.at(1).get<double>()});
    }
    throw ConstructionError("unknown spec variant '" + variant + "'");
}

}  // namespace reebstrip
