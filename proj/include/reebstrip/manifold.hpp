#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "reebstrip/strip.hpp"

namespace reebstrip {

// X_{m,c1,c2} = zero set of F(x1, x2, y) = (x1 - c1(x2))(c2(x2) - x1) - sum y_j^2
// inside closure(D) x R^{m-1}.
struct ManifoldSpec {
    int m = 2;  // >= 2
    StripRegion region;
};

struct ZeroSample {
    double x1 = 0.0;
    double x2 = 0.0;
    std::vector<double> y;  // m-1 entries
    bool on_boundary = false;
};

// Defining function and its first partials at a point.
struct FJet {
    double F = 0.0;
    double dx1 = 0.0;  // c1 + c2 - 2 x1
    double dx2 = 0.0;  // -c1'(x2)(c2 - x1) + (x1 - c1) c2'(x2)
    std::vector<double> dy;  // -2 y_j
    double grad_norm() const;
};

FJet f_jet(const ManifoldSpec& spec, const ZeroSample& p);

// n interior points built exactly on the zero set (x1 uniform in the strip,
// y on the sphere of radius rho = sqrt((x1-c1)(c2-x1))), plus n/10 boundary
// points with y = 0. Deterministic under the seed.
std::vector<ZeroSample> sample_zero_set(const ManifoldSpec& spec, int n, uint64_t seed);

struct RegularityReport {
    bool holds = false;
    double min_grad_norm = 0.0;
    double min_boundary_margin = 0.0;  // min |dF/dx1| over boundary samples
    int checked = 0;
};

RegularityReport verify_regularity(const ManifoldSpec& spec, const std::vector<ZeroSample>& samples,
                                   const Tolerances& tol);

// || (dF/dx2, dF/dy) ||: vanishes exactly at critical points of the
// restricted height x1.
double critical_residual(const ManifoldSpec& spec, const ZeroSample& p);

struct HessianVerdict {
    std::vector<double> eigenvalues;  // of the Hessian of the local graph x1 = phi(x2, y)
    double min_abs = 0.0;
    int index = 0;  // negative eigenvalue count
    bool nondegenerate = false;
};

// Second-order implicit differentiation of F = 0 at a critical point with
// |dF/dx1| > tol: Hessian(phi) = -Hess_{(x2,y)}F / F_x1, diagonal here.
HessianVerdict restricted_hessian(const ManifoldSpec& spec, const ZeroSample& critical_point,
                                  const Tolerances& tol);

nlohmann::json sample_to_json(const ManifoldSpec& spec, const ZeroSample& p);

}  // namespace reebstrip
