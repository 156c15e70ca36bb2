#include "bmojn/extremal.hpp"

#include <cmath>
#include <sstream>

#include "bmojn/constants.hpp"

namespace bmojn {

namespace {
constexpr double kBottomTol = 1e-12;
const double kSqrt2 = std::sqrt(2.0);

void require_member(const BellmanPoint& p, double eps, const char* who) {
    if (!ParabolicStrip(eps).contains(p)) {
        std::ostringstream ss;
        ss << who << ": point (" << p.x1 << ", " << p.x2 << ") outside the eps = " << eps
           << " strip";
        throw std::domain_error(ss.str());
    }
}
} // namespace

ExtremalParams ExtremalParams::from_point(const BellmanPoint& p, double eps, double delta) {
    if (!(delta > eps && eps > 0.0))
        throw std::invalid_argument("ExtremalParams: need 0 < eps < delta");
    ExtremalParams out;
    out.r1 = std::sqrt(delta * delta - eps * eps);
    out.r2 = vertical_gap(p, delta);
    out.beta = out.r2 - out.r1;
    out.gamma = out.r2 - delta;
    out.alpha = (delta - out.r2) / (delta - out.r1);
    out.alpha = std::min(1.0, std::max(0.0, out.alpha));
    return out;
}

PiecewiseFunction continuous_extremal(const BellmanPoint& p, double eps, Sign sign) {
    require_member(p, eps, "continuous_extremal");
    if (sign == Sign::plus && eps >= 1.0)
        throw std::invalid_argument("continuous_extremal: plus branch requires eps < 1");
    if (p.x2 <= p.x1 * p.x1 + kBottomTol) return PiecewiseFunction::constant(p.x1);
    const double gamma = signum(sign) * eps;
    const double a = 1.0 - std::sqrt(eps * eps + p.x1 * p.x1 - p.x2) / eps;
    const double b = p.x1 - gamma * a;
    return PiecewiseFunction::log_ramp(a, b, gamma);
}

DyadicStepFunction dyadic_base(double eps, int depth) {
    if (!(eps > 0.0)) throw std::invalid_argument("dyadic_base: eps must be positive");
    if (depth < 0 || depth > 50)
        throw std::invalid_argument("dyadic_base: depth out of range");
    const double a = eps / kSqrt2;
    std::vector<DyadicPiece> pieces;
    pieces.reserve(depth + 1);
    // block j = (2^{-j-1}, 2^{-j}] carries (j-1) a; the analytic staircase
    // continues below the explicit depth
    for (int j = 0; j < depth; ++j)
        pieces.push_back(DyadicPiece{j + 1, 1, false, (j - 1) * a, 0.0});
    pieces.push_back(DyadicPiece{depth, 0, true, (depth - 1) * a, a});
    return DyadicStepFunction(depth, std::move(pieces));
}

namespace {

// x1 + sg*phi0 for a top-boundary point: the base staircase, shifted.
DyadicStepFunction shifted_base(double x1, double eps, Sign sign, int depth) {
    const double a = signum(sign) * eps / kSqrt2;
    std::vector<DyadicPiece> pieces;
    pieces.reserve(depth + 1);
    for (int j = 0; j < depth; ++j)
        pieces.push_back(DyadicPiece{j + 1, 1, false, x1 + (j - 1) * a, 0.0});
    pieces.push_back(DyadicPiece{depth, 0, true, x1 + (depth - 1) * a, a});
    return DyadicStepFunction(depth, std::move(pieces));
}

} // namespace

DyadicStepFunction dyadic_extremal(const BellmanPoint& p, double eps, Sign sign, int depth) {
    require_member(p, eps, "dyadic_extremal");
    if (sign == Sign::plus && eps >= eps0_dyadic())
        throw std::invalid_argument(
            "dyadic_extremal: plus branch requires eps < sqrt(2) log 2");
    if (depth < 1 || depth > 50)
        throw std::invalid_argument("dyadic_extremal: depth out of range");

    const double delta = delta_root(eps, sign).root;
    const ExtremalParams par = ExtremalParams::from_point(p, eps, delta);
    const double sg = signum(sign);
    const double a = eps / kSqrt2;

    if (par.alpha >= 1.0 - kBottomTol) return shifted_base(p.x1, eps, sign, depth);
    if (par.alpha <= kBottomTol) {
        // bottom boundary: the constant x1 (gamma = 0)
        std::vector<DyadicPiece> one{DyadicPiece{0, 0, false, p.x1 + sg * par.gamma, 0.0}};
        return DyadicStepFunction(0, std::move(one));
    }

    const std::vector<int> digits = dyadic_digits(par.alpha, depth);
    std::vector<DyadicPiece> pieces;
    pieces.reserve(depth + 1);
    for (int k = 1; k <= depth; ++k) {
        if (digits[k - 1] == 1)
            pieces.push_back(
                DyadicPiece{k, 1, true, p.x1 + sg * (par.beta - a), sg * a});
        else
            pieces.push_back(DyadicPiece{k, 1, false, p.x1 + sg * par.gamma, 0.0});
    }
    pieces.push_back(DyadicPiece{depth, 0, false, p.x1 + sg * par.gamma, 0.0});
    return DyadicStepFunction(depth, std::move(pieces));
}

std::vector<int> perspective2_digits(const BellmanPoint& p, double eps, double delta,
                                     int n_digits) {
    require_member(p, eps, "perspective2_digits");
    if (!(delta > eps))
        throw std::invalid_argument("perspective2_digits: need delta > eps");
    const double r1 = std::sqrt(delta * delta - eps * eps);
    double z = ExtremalParams::from_point(p, eps, delta).alpha;

    std::vector<int> bits(static_cast<std::size_t>(std::max(0, n_digits)), 0);
    for (int k = 0; k < n_digits; ++k) {
        const double r2 = delta - z * (delta - r1);
        const double d = delta + r1 - 2.0 * r2;
        if (std::abs(d) <= 1e-12) { // equality branch: emit 1 and stop
            bits[k] = 1;
            break;
        }
        if (d > 0.0) {
            bits[k] = 1;
            z = 2.0 * z - 1.0;
        } else {
            bits[k] = 0;
            z = 2.0 * z;
        }
    }
    return bits;
}

} // namespace bmojn
