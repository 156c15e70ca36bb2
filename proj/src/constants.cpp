#include "bmojn/constants.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace bmojn {

namespace {

constexpr double kDenomTol = 1e-14;
constexpr double kResidualTol = 1e-12;
const double kSqrt2 = std::sqrt(2.0);

void require_nonnegative(double eps, const char* who) {
    if (eps < 0.0) {
        std::ostringstream ss;
        ss << who << ": eps must be nonnegative, got " << eps;
        throw std::invalid_argument(ss.str());
    }
}

// Bisection to 1e-13 bracket width, then one Newton polish with the
// supplied derivative; the polish is dropped if it exits the bracket or
// fails to reduce the residual.
RootResult bracketed_root(double lo, double hi, const std::function<double(double)>& f,
                          const std::function<double(double)>& df) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return RootResult{lo, 0.0, lo, hi, 0};
    if (fhi == 0.0) return RootResult{hi, 0.0, lo, hi, 0};
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream ss;
        ss << "bracketed_root: endpoints do not straddle the root, f(" << lo
           << ") = " << flo << ", f(" << hi << ") = " << fhi;
        throw std::runtime_error(ss.str());
    }
    const double b_lo = lo, b_hi = hi;
    int it = 0;
    while (hi - lo > 1e-13 && it < 200) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        ++it;
    }
    double root = 0.5 * (lo + hi);
    const double slope = df(root);
    if (slope != 0.0) {
        const double polished = root - f(root) / slope;
        if (polished > b_lo && polished < b_hi &&
            std::abs(f(polished)) <= std::abs(f(root)))
            root = polished;
    }
    return RootResult{root, f(root), b_lo, b_hi, it};
}

} // namespace

double eps0_dyadic() { return kSqrt2 * std::log(2.0); }

ExtendedValue c_continuous(double eps) {
    require_nonnegative(eps, "c_continuous");
    if (eps >= kEps0Continuous) return ExtendedValue::infinity();
    return ExtendedValue::of(std::exp(-eps) / (1.0 - eps));
}

ExtendedValue c_dyadic(double eps) {
    require_nonnegative(eps, "c_dyadic");
    const double denom = 2.0 - std::exp(eps / kSqrt2);
    if (eps >= eps0_dyadic() || denom <= kDenomTol) return ExtendedValue::infinity();
    return ExtendedValue::of(std::exp(-eps / kSqrt2) / denom);
}

double g_function(double delta, double eps, Sign sign) {
    if (!(eps > 0.0)) throw std::invalid_argument("g_function: eps must be positive");
    if (delta < eps) {
        std::ostringstream ss;
        ss << "g_function: delta = " << delta << " < eps = " << eps;
        throw std::domain_error(ss.str());
    }
    const double r = std::sqrt(std::max(0.0, delta * delta - eps * eps));
    const double c = eps / kSqrt2;
    if (sign == Sign::plus)
        return (1.0 - r) * std::exp(r) * (2.0 - std::exp(c)) -
               (1.0 - delta) * std::exp(delta - c);
    return (1.0 + r) * std::exp(-r) * (2.0 - std::exp(-c)) -
           (1.0 + delta) * std::exp(-delta + c);
}

double g_function_ddelta(double delta, double eps, Sign sign) {
    const double r = std::sqrt(std::max(0.0, delta * delta - eps * eps));
    const double c = eps / kSqrt2;
    if (sign == Sign::plus)
        return delta * (std::exp(delta - c) - std::exp(r) * (2.0 - std::exp(c)));
    return delta * (std::exp(-delta + c) - std::exp(-r) * (2.0 - std::exp(-c)));
}

RootResult delta_root(double eps, Sign sign) {
    if (sign == Sign::plus) {
        if (!(eps > 0.0 && eps < eps0_dyadic()))
            throw std::invalid_argument(
                "delta_root: plus branch requires 0 < eps < sqrt(2) log 2");
    } else if (!(eps > 0.0)) {
        throw std::invalid_argument("delta_root: eps must be positive");
    }
    const double cap = 3.0 * eps / (2.0 * kSqrt2);
    const double hi = sign == Sign::plus ? 1.0 : cap;
    RootResult res =
        bracketed_root(eps, hi, [&](double d) { return g_function(d, eps, sign); },
                       [&](double d) { return g_function_ddelta(d, eps, sign); });
    if (std::abs(res.residual) > kResidualTol) {
        std::ostringstream ss;
        ss << "delta_root: residual " << res.residual << " exceeds " << kResidualTol;
        throw std::runtime_error(ss.str());
    }
    if (sign == Sign::plus && res.root > cap + 1e-12) {
        std::ostringstream ss;
        ss << "delta_root: plus root " << res.root << " exceeds 3 eps/(2 sqrt 2) = " << cap;
        throw std::runtime_error(ss.str());
    }
    return res;
}

// ---------------------------------------------------------------------------
// Conjectural n-dimensional quantities
// ---------------------------------------------------------------------------

namespace {

double g_nd(double delta, double eps, int n, Sign sign) {
    const double sg = signum(sign);
    const double r = std::sqrt(std::max(0.0, delta * delta - eps * eps));
    const double p = std::exp2(0.5 * n); // 2^{n/2}
    const double two_n = std::exp2(n);
    return (1.0 - sg * r) * std::exp(sg * (r - delta)) *
               (two_n - std::exp(sg * (p - 1.0 / p) * eps)) -
           (1.0 - sg * delta) * (two_n - 1.0) * std::exp(-sg * eps / p);
}

} // namespace

ConjecturedNd conjectured_nd(double eps, int n) {
    if (n < 1) throw std::invalid_argument("conjectured_nd: n must be at least 1");
    require_nonnegative(eps, "conjectured_nd");
    const double p = std::exp2(0.5 * n);
    const double two_n = std::exp2(n);

    ConjecturedNd out;
    out.eps0_nd = n * std::log(2.0) / (p - 1.0 / p);
    const double denom = two_n - std::exp((p - 1.0 / p) * eps);
    out.c_nd = (eps >= out.eps0_nd || denom <= kDenomTol)
                   ? ExtendedValue::infinity()
                   : ExtendedValue::of((two_n - 1.0) * std::exp(-eps / p) / denom);

    if (eps == 0.0) {
        out.delta_plus_nd = 0.0;
        out.delta_minus_nd = 0.0;
        return out;
    }

    auto fd_slope = [&](Sign s) {
        return [=](double d) {
            const double h = 1e-7;
            return (g_nd(d + h, eps, n, s) - g_nd(d - h, eps, n, s)) / (2.0 * h);
        };
    };

    if (eps < out.eps0_nd) {
        RootResult plus =
            bracketed_root(eps, 1.0, [&](double d) { return g_nd(d, eps, n, Sign::plus); },
                           fd_slope(Sign::plus));
        out.delta_plus_nd = plus.root;
    } else {
        out.delta_plus_nd = std::numeric_limits<double>::quiet_NaN();
    }

    // No bracket is known for the minus root at n >= 2; widen geometrically
    // and report failure honestly if no sign change appears.
    double hi = 2.0 * eps;
    const double flo = g_nd(eps, eps, n, Sign::minus);
    int tries = 0;
    while ((flo > 0.0) == (g_nd(hi, eps, n, Sign::minus) > 0.0) && tries < 6) {
        hi *= 2.0;
        ++tries;
    }
    RootResult minus =
        bracketed_root(eps, hi, [&](double d) { return g_nd(d, eps, n, Sign::minus); },
                       fd_slope(Sign::minus));
    out.delta_minus_nd = minus.root;
    return out;
}

} // namespace bmojn
