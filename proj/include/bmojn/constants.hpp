#ifndef BMOBMOJN_CONSTANTS_HPP
#define BMOBMOJN_CONSTANTS_HPP

#include "bmojn/types.hpp"

namespace bmojn {

/// Critical norm radius in the continuous setting.
inline constexpr double kEps0Continuous = 1.0;

/// Critical norm radius in the dyadic setting: sqrt(2) * log 2.
double eps0_dyadic();

/// C(eps) = e^{-eps}/(1-eps) for eps < 1, infinite past the threshold.
ExtendedValue c_continuous(double eps);

/// C^d(eps) = e^{-eps/sqrt2} / (2 - e^{eps/sqrt2}) for eps < sqrt(2) log 2,
/// infinite past the threshold.
ExtendedValue c_dyadic(double eps);

/// The transcendental function whose root in delta defines the dyadic
/// Bellman parameter:
///   plus:  (1-r) e^{r} (2 - e^{eps/sqrt2}) - (1-delta) e^{delta-eps/sqrt2}
///   minus: (1+r) e^{-r}(2 - e^{-eps/sqrt2}) - (1+delta) e^{-delta+eps/sqrt2}
/// with r = sqrt(delta^2 - eps^2).  Requires delta >= eps.
double g_function(double delta, double eps, Sign sign);

/// Analytic d(g)/d(delta), used for the Newton polish step.
double g_function_ddelta(double delta, double eps, Sign sign);

struct RootResult {
    double root;
    double residual;
    double bracket_lo;
    double bracket_hi;
    int iterations;
};

/// Bracketed root of g_function(., eps, sign): bisection to 1e-13 bracket
/// width plus one Newton polish (discarded if it exits the bracket).
/// Plus on (eps, 1) for 0 < eps < sqrt(2) log 2; minus on (eps, 3eps/(2sqrt2))
/// for eps > 0.  Checks |residual| <= 1e-12 and the bound
/// delta <= 3 eps / (2 sqrt 2) for the plus root.
RootResult delta_root(double eps, Sign sign);

/// Conjectural n-dimensional dyadic quantities.  All emitters must label
/// these CONJECTURAL.
struct ConjecturedNd {
    ExtendedValue c_nd;
    double eps0_nd;
    double delta_plus_nd;
    double delta_minus_nd;
};

/// Evaluates the conjectured closed forms and solves the conjectured
/// transcendental equations for delta_n^{+/-} by bracketed bisection
/// (plus on (eps,1); minus on (eps,2eps), widened geometrically if needed).
/// At n = 1 this reduces exactly to c_dyadic and delta_root.
ConjecturedNd conjectured_nd(double eps, int n);

} // namespace bmojn

#endif
