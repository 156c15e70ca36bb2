#ifndef BMOBMOJN_BELLMAN_HPP
#define BMOBMOJN_BELLMAN_HPP

#include <array>

#include "bmojn/domain.hpp"
#include "bmojn/types.hpp"

namespace bmojn {

// Closed-form evaluation of the two-parameter family
//
//   B(x) = (1 -/+ g)/(1 -/+ delta) * exp(x1 +/- g -/+ delta),
//   g = sqrt(delta^2 + x1^2 - x2),
//
// together with its gradient, Hessian, the associated quadratic form, the
// reduced profile w, and the ODE residual the profile satisfies.

/// Default finite-difference steps (documented, overridable per call).
inline constexpr double kFdStepFirst = 1e-5;
inline constexpr double kFdStepSecond = 1e-4;

/// Gap below this counts as the singular top boundary for derivatives.
inline constexpr double kBoundaryGapTol = 1e-10;

struct BellmanDerivatives {
    double value;
    std::array<double, 2> grad;
    // symmetric Hessian stored as three entries
    double h11, h12, h22;
};

/// w(t) = log((1 -/+ sqrt(delta^2-t))/(1 -/+ delta)) +/- sqrt(delta^2-t) -/+ delta
/// on [0, delta^2]; w(0) = 0 exactly.  Plus requires delta < 1.
double w_profile(double t, double delta, Sign sign);

/// B evaluated at p.  Admits the top boundary (gap = 0).  For Plus with
/// delta >= 1: e^{x1} on the bottom boundary, the infinite sentinel above it.
ExtendedValue bellman_value(const BellmanPoint& p, double delta, Sign sign);

/// The five closed-form partials.  Requires gap > 1e-10 (the Hessian is
/// singular on the top boundary).
BellmanDerivatives bellman_derivatives(const BellmanPoint& p, double delta, Sign sign);

/// -/+ sum_ij d^2B/dx_i dx_j d_i d_j via the rank-one closed form
/// ((x1 +/- g) d1 - d2/2)^2 exp{..}/(g (1 -/+ delta)); always >= 0.
double quadratic_form(const BellmanPoint& p, const std::array<double, 2>& d,
                      double delta, Sign sign);

/// (1-2w')((w')^2+w'') - (w')^2 with w', w'' from central differences of
/// w_profile at step h.  Also checks the sign condition +/-(2w'-1) >= 0.
double ode_residual(double t, double delta, Sign sign, double h = kFdStepSecond);

} // namespace bmojn

#endif
