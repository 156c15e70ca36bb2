#include "bmojn/bellman.hpp"

#include <cmath>
#include <sstream>

namespace bmojn {

double w_profile(double t, double delta, Sign sign) {
    if (!(delta > 0.0)) throw std::invalid_argument("w_profile: delta must be positive");
    if (sign == Sign::plus && delta >= 1.0)
        throw std::invalid_argument("w_profile: plus branch requires delta < 1");
    if (t < 0.0 || t > delta * delta)
        throw std::domain_error("w_profile: t outside [0, delta^2]");
    if (t == 0.0) return 0.0;
    const double sg = signum(sign);
    const double s = std::sqrt(delta * delta - t);
    return std::log((1.0 - sg * s) / (1.0 - sg * delta)) + sg * (s - delta);
}

ExtendedValue bellman_value(const BellmanPoint& p, double delta, Sign sign) {
    const double sg = signum(sign);
    if (sign == Sign::plus && delta >= 1.0) {
        // Past the critical radius the supremum blows up off the bottom boundary.
        if (p.x2 > p.x1 * p.x1 + 1e-12) return ExtendedValue::infinity();
        return ExtendedValue::of(std::exp(p.x1));
    }
    const double g = vertical_gap(p, delta);
    const double v =
        (1.0 - sg * g) / (1.0 - sg * delta) * std::exp(p.x1 + sg * (g - delta));
    return ExtendedValue::of(v);
}

BellmanDerivatives bellman_derivatives(const BellmanPoint& p, double delta, Sign sign) {
    if (sign == Sign::plus && delta >= 1.0)
        throw std::invalid_argument("bellman_derivatives: plus branch requires delta < 1");
    const double sg = signum(sign);
    const double g = vertical_gap(p, delta);
    if (g <= kBoundaryGapTol) {
        std::ostringstream ss;
        ss << "bellman_derivatives: Hessian is singular on the top boundary (gap = " << g
           << ")";
        throw std::domain_error(ss.str());
    }
    const double denom = 1.0 - sg * delta;
    const double e = std::exp(p.x1 + sg * (g - delta));
    const double q = p.x1 + sg * g;

    BellmanDerivatives d;
    d.value = (1.0 - sg * g) / denom * e;
    d.grad = {(1.0 - p.x1 - sg * g) / denom * e, e / (2.0 * denom)};
    d.h11 = -sg * q * q / (g * denom) * e;
    d.h12 = sg * q / (2.0 * g * denom) * e;
    d.h22 = -sg / (4.0 * g * denom) * e;
    return d;
}

double quadratic_form(const BellmanPoint& p, const std::array<double, 2>& d, double delta,
                      Sign sign) {
    if (sign == Sign::plus && delta >= 1.0)
        throw std::invalid_argument("quadratic_form: plus branch requires delta < 1");
    const double sg = signum(sign);
    const double g = vertical_gap(p, delta);
    if (g <= kBoundaryGapTol)
        throw std::domain_error("quadratic_form: singular on the top boundary");
    const double t = (p.x1 + sg * g) * d[0] - 0.5 * d[1];
    return t * t / (g * (1.0 - sg * delta)) * std::exp(p.x1 + sg * (g - delta));
}

double ode_residual(double t, double delta, Sign sign, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("ode_residual: h must be positive");
    if (!(t > h && t < delta * delta - h))
        throw std::domain_error("ode_residual: t too close to the ends of (0, delta^2)");
    const double wm = w_profile(t - h, delta, sign);
    const double w0 = w_profile(t, delta, sign);
    const double wp = w_profile(t + h, delta, sign);
    const double w1 = (wp - wm) / (2.0 * h);
    const double w2 = (wp - 2.0 * w0 + wm) / (h * h);
    if (signum(sign) * (2.0 * w1 - 1.0) < -1e-9) {
        std::ostringstream ss;
        ss << "ode_residual: sign condition violated at t = " << t
           << " (2w' - 1 = " << 2.0 * w1 - 1.0 << ")";
        throw std::runtime_error(ss.str());
    }
    return (1.0 - 2.0 * w1) * (w1 * w1 + w2) - w1 * w1;
}

} // namespace bmojn
