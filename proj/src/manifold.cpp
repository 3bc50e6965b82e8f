#include "reebstrip/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace reebstrip {

namespace {

// splitmix64; uniform doubles come from explicit bit manipulation so sampling
// is reproducible across standard libraries
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

// uniform direction on S^{d-1} via normalized Gaussians (Box-Muller)
std::vector<double> sphere_dir(Rng& rng, int d) {
    std::vector<double> u(d);
    if (d == 1) {
        u[0] = rng.next() & 1 ? 1.0 : -1.0;
        return u;
    }
    double norm2 = 0.0;
    do {
        for (int i = 0; i < d; i += 2) {
            const double r = std::sqrt(-2.0 * std::log(1.0 - rng.uniform()));
            const double a = 2.0 * std::numbers::pi * rng.uniform();
            u[i] = r * std::cos(a);
            if (i + 1 < d) u[i + 1] = r * std::sin(a);
        }
        norm2 = 0.0;
        for (double v : u) norm2 += v * v;
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : u) v *= inv;
    return u;
}

}  // namespace

double FJet::grad_norm() const {
    double s = dx1 * dx1 + dx2 * dx2;
    for (double v : dy) s += v * v;
    return std::sqrt(s);
}

FJet f_jet(const ManifoldSpec& spec, const ZeroSample& p) {
    const Jet2 j1 = spec.region.c1.jet(p.x2);
    const Jet2 j2 = spec.region.c2.jet(p.x2);
    FJet out;
    double y2 = 0.0;
    for (double v : p.y) y2 += v * v;
    out.F = (p.x1 - j1.v) * (j2.v - p.x1) - y2;
    out.dx1 = j1.v + j2.v - 2.0 * p.x1;
    out.dx2 = -j1.d1 * (j2.v - p.x1) + (p.x1 - j1.v) * j2.d1;
    out.dy.resize(p.y.size());
    for (size_t i = 0; i < p.y.size(); ++i) out.dy[i] = -2.0 * p.y[i];
    return out;
}

std::vector<ZeroSample> sample_zero_set(const ManifoldSpec& spec, int n, uint64_t seed) {
    if (spec.m < 2) throw std::invalid_argument("manifold dimension m must be >= 2");
    Rng rng(seed);
    std::vector<ZeroSample> out;
    out.reserve(static_cast<size_t>(n) + static_cast<size_t>(n) / 10);
    const Window& w = spec.region.window;

    for (int i = 0; i < n; ++i) {
        ZeroSample s;
        s.x2 = rng.uniform(w.lo, w.hi);
        const double lo = spec.region.c1.value(s.x2);
        const double hi = spec.region.c2.value(s.x2);
        s.x1 = rng.uniform(lo, hi);
        const double rho2 = (s.x1 - lo) * (hi - s.x1);
        const double rho = std::sqrt(std::max(0.0, rho2));
        s.y = sphere_dir(rng, spec.m - 1);
        for (double& v : s.y) v *= rho;
        s.on_boundary = rho2 <= 0.0;
        out.push_back(std::move(s));
    }
    for (int i = 0; i < n / 10; ++i) {
        ZeroSample s;
        s.x2 = rng.uniform(w.lo, w.hi);
        const bool lower = rng.next() & 1;
        s.x1 = lower ? spec.region.c1.value(s.x2) : spec.region.c2.value(s.x2);
        s.y.assign(static_cast<size_t>(spec.m - 1), 0.0);
        s.on_boundary = true;
        out.push_back(std::move(s));
    }
    return out;
}

RegularityReport verify_regularity(const ManifoldSpec& spec, const std::vector<ZeroSample>& samples,
                                   const Tolerances& tol) {
    RegularityReport rep;
    rep.min_grad_norm = std::numeric_limits<double>::infinity();
    rep.min_boundary_margin = std::numeric_limits<double>::infinity();
    for (const auto& p : samples) {
        const FJet fj = f_jet(spec, p);
        rep.min_grad_norm = std::min(rep.min_grad_norm, fj.grad_norm());
        if (p.on_boundary)
            rep.min_boundary_margin = std::min(rep.min_boundary_margin, std::abs(fj.dx1));
        ++rep.checked;
    }
    rep.holds = rep.min_grad_norm > 0.0 &&
                rep.min_boundary_margin >= spec.region.separation_certificate - tol.residual;
    return rep;
}

double critical_residual(const ManifoldSpec& spec, const ZeroSample& p) {
    const FJet fj = f_jet(spec, p);
    if (std::abs(fj.F) > 1e-6)
        throw std::invalid_argument("point is not on the zero set (|F| = " +
                                    std::to_string(std::abs(fj.F)) + ")");
    double s = fj.dx2 * fj.dx2;
    for (double v : fj.dy) s += v * v;
    return std::sqrt(s);
}

HessianVerdict restricted_hessian(const ManifoldSpec& spec, const ZeroSample& p,
                                  const Tolerances& tol) {
    const FJet fj = f_jet(spec, p);
    if (std::abs(fj.dx1) <= tol.residual)
        throw std::invalid_argument("implicit solve fails: |dF/dx1| vanishes at the point");

    const Jet2 j1 = spec.region.c1.jet(p.x2);
    const Jet2 j2 = spec.region.c2.jet(p.x2);
    // F_{x2 x2} = -c1''(c2 - x1) - 2 c1' c2' + (x1 - c1) c2''; F_{y y} = -2 I;
    // the mixed terms F_{x2 y} vanish, so Hess(phi) = -Hess F / F_x1 is diagonal.
    const double f_x2x2 =
        -j1.d2 * (j2.v - p.x1) - 2.0 * j1.d1 * j2.d1 + (p.x1 - j1.v) * j2.d2;

    HessianVerdict out;
    out.eigenvalues.push_back(-f_x2x2 / fj.dx1);
    for (int j = 1; j < spec.m; ++j) out.eigenvalues.push_back(2.0 / fj.dx1);

    out.min_abs = std::numeric_limits<double>::infinity();
    for (double ev : out.eigenvalues) {
        out.min_abs = std::min(out.min_abs, std::abs(ev));
        if (ev < 0.0) ++out.index;
    }
    out.nondegenerate = out.min_abs > tol.hess_abs;
    return out;
}

nlohmann::json sample_to_json(const ManifoldSpec& spec, const ZeroSample& p) {
    const FJet fj = f_jet(spec, p);
    nlohmann::json pt = nlohmann::json::array();
    pt.push_back(p.x1);
    pt.push_back(p.x2);
    for (double v : p.y) pt.push_back(v);
    nlohmann::json grad = nlohmann::json::array();
    grad.push_back(fj.dx1);
    grad.push_back(fj.dx2);
    for (double v : fj.dy) grad.push_back(v);
    return {{"p", std::move(pt)}, {"F", fj.F}, {"gradF", std::move(grad)}, {"boundary", p.on_boundary}};
}

}  // namespace reebstrip
