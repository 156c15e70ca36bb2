#ifndef BMOBMOJN_DOMAIN_HPP
#define BMOBMOJN_DOMAIN_HPP

#include "bmojn/piecewise.hpp"
#include "bmojn/types.hpp"

namespace bmojn {

/// A pair of first and second moments of some function over an interval.
/// The constructor enforces the Cauchy inequality x2 >= x1^2 (within 1e-12).
struct BellmanPoint {
    double x1;
    double x2;

    BellmanPoint(double x1_, double x2_);
};

/// The parabolic strip x1^2 <= x2 <= x1^2 + eps^2.
struct ParabolicStrip {
    double eps;

    explicit ParabolicStrip(double eps_);
    bool contains(const BellmanPoint& p) const;
};

bool contains(const ParabolicStrip& strip, const BellmanPoint& p);

/// sqrt(delta^2 + x1^2 - x2): the square root of the vertical distance from
/// p to the parabola x2 = x1^2 + delta^2.  Throws std::domain_error on a
/// negative radicand.
double vertical_gap(const BellmanPoint& p, double delta);

/// Abscissa c = x1 +/- vertical_gap of the tangency point of the line
/// through p tangent to x2 = x1^2 + delta^2.  The sign selects the upper
/// or lower trajectory family.
double tangent_contact(const BellmanPoint& p, double delta, Sign sign);

struct SplitResult {
    double alpha_plus;     // |I_+| / |I|
    BellmanPoint x_minus;  // moments over I_- = (0, 1-alpha_plus]
    BellmanPoint x_plus;   // moments over I_+ = (1-alpha_plus, 1]
    double rho_value;      // max of x2 - x1^2 over the tracked sub-segment
    bool tangent_stop;     // true when the bisection stopped at rho = eps1^2
};

/// Interval-splitting: chooses alpha_plus so the segment [x^-, x^+] lies in
/// the enlarged strip of half-width eps1.  Midpoint split is kept when it
/// already works; otherwise bisection moves the violating endpoint toward
/// the whole-interval point until rho(alpha_plus) = eps1^2 (tolerance 1e-9).
/// The caller guarantees the continuous norm of phi is at most eps.
SplitResult split_interval(const PiecewiseFunction& phi, double eps, double eps1);

/// max over the straight segment [p, q] of x2 - x1^2 (concave quadratic:
/// evaluated at the vertex and the endpoints, no sampling).
double segment_gap_max(const BellmanPoint& p, const BellmanPoint& q);

} // namespace bmojn

#endif
