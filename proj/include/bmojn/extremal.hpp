#ifndef BMOBMOJN_EXTREMAL_HPP
#define BMOBMOJN_EXTREMAL_HPP

#include <vector>

#include "bmojn/bellman.hpp"
#include "bmojn/domain.hpp"
#include "bmojn/piecewise.hpp"
#include "bmojn/types.hpp"

namespace bmojn {

/// Geometry of a point relative to the delta- and eps-parabolas, in the
/// coordinates used by the dyadic extremizer construction:
///   r1 = sqrt(delta^2 - eps^2), r2 = sqrt(delta^2 - x2 + x1^2),
///   beta = r2 - r1, gamma = r2 - delta, alpha = (delta-r2)/(delta-r1).
struct ExtremalParams {
    double r1, r2, beta, gamma, alpha;

    static ExtremalParams from_point(const BellmanPoint& p, double eps, double delta);
};

/// The two-piece extremizer gamma*log(a/t)+b / b with gamma = +/- eps,
/// a = 1 - sqrt(eps^2+x1^2-x2)/eps, b = x1 - gamma*a.  Its moments over
/// (0,1] are exactly (x1,x2) and its exponential average equals the
/// Bellman value at p.  Bottom-boundary points yield the constant x1.
PiecewiseFunction continuous_extremal(const BellmanPoint& p, double eps, Sign sign);

/// The staircase taking value (k-1)*eps/sqrt2 on (2^{-k-1}, 2^{-k}]:
/// explicit pieces to `depth` blocks, analytic staircase tail beyond.
/// Its dyadic norm is exactly eps.
DyadicStepFunction dyadic_base(double eps, int depth);

/// The digit-rearranged extremizer x1 +/- psi, where psi places a scaled
/// staircase (digit 1) or the constant gamma (digit 0) on each dyadic
/// block, digits taken from the binary expansion of alpha at
/// delta = delta_root(eps, sign).  `depth` limits the digit stream; the
/// remainder block is the constant gamma.
DyadicStepFunction dyadic_extremal(const BellmanPoint& p, double eps, Sign sign, int depth);

/// The tangent-line halving recursion emitting one digit per step:
/// compare delta + r1 against 2 r2, place a constant (digit 0) or a scaled
/// staircase (digit 1) on the right half, halve, repeat.  The equality
/// branch fires within 1e-12 and terminates the stream.
///
/// Implementation note: r2 is recomputed each step from the exact doubling
/// map z_k = {2 z_{k-1}} via r2 = delta - z (delta - r1), rather than from
/// accumulated point coordinates; this is the stable reduction the
/// recursion provably performs, and it makes the stream reproduce
/// dyadic_digits(alpha) bit for bit.
std::vector<int> perspective2_digits(const BellmanPoint& p, double eps, double delta,
                                     int n_digits);

} // namespace bmojn

#endif
