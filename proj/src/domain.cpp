#include "bmojn/domain.hpp"

#include <cmath>
#include <sstream>

namespace bmojn {

namespace {
constexpr double kCauchyTol = 1e-12;
constexpr double kMemberTol = 1e-12;
constexpr double kRhoTol = 1e-9;
constexpr int kBisectionCap = 200;
} // namespace

BellmanPoint::BellmanPoint(double x1_, double x2_) : x1(x1_), x2(x2_) {
    if (x2 < x1 * x1 - kCauchyTol) {
        std::ostringstream ss;
        ss << "BellmanPoint: Cauchy violation, x2 = " << x2 << " < x1^2 = " << x1 * x1;
        throw std::domain_error(ss.str());
    }
}

ParabolicStrip::ParabolicStrip(double eps_) : eps(eps_) {
    if (!(eps > 0.0)) throw std::invalid_argument("ParabolicStrip: eps must be positive");
}

bool ParabolicStrip::contains(const BellmanPoint& p) const {
    return p.x2 >= p.x1 * p.x1 - kMemberTol &&
           p.x2 <= p.x1 * p.x1 + eps * eps + kMemberTol;
}

bool contains(const ParabolicStrip& strip, const BellmanPoint& p) {
    return strip.contains(p);
}

double vertical_gap(const BellmanPoint& p, double delta) {
    const double rad = delta * delta + p.x1 * p.x1 - p.x2;
    if (rad < 0.0) {
        if (rad > -kMemberTol) return 0.0;
        std::ostringstream ss;
        ss << "vertical_gap: point (" << p.x1 << ", " << p.x2
           << ") lies above the parabola x2 = x1^2 + " << delta << "^2";
        throw std::domain_error(ss.str());
    }
    return std::sqrt(rad);
}

double tangent_contact(const BellmanPoint& p, double delta, Sign sign) {
    return p.x1 + signum(sign) * vertical_gap(p, delta);
}

double segment_gap_max(const BellmanPoint& p, const BellmanPoint& q) {
    // h(t) = x2(t) - x1(t)^2 along x(t) = p + t (q - p) is concave quadratic.
    const double d1 = q.x1 - p.x1, d2 = q.x2 - p.x2;
    auto h = [&](double t) {
        const double x1 = p.x1 + t * d1;
        return p.x2 + t * d2 - x1 * x1;
    };
    double best = std::max(h(0.0), h(1.0));
    if (d1 != 0.0) {
        const double tv = (d2 / (2.0 * d1) - p.x1) / d1;
        if (tv > 0.0 && tv < 1.0) best = std::max(best, h(tv));
    }
    return best;
}

namespace {

struct SplitState {
    const PiecewiseFunction* phi;
    BellmanPoint x0{0.0, 0.0};

    BellmanPoint left_point(double alpha_plus) const {
        const MomentTriple m = moments(*phi, 0.0, 1.0 - alpha_plus);
        return BellmanPoint(m.mean, m.second);
    }
    BellmanPoint right_point(double alpha_plus) const {
        const MomentTriple m = moments(*phi, 1.0 - alpha_plus, 1.0);
        return BellmanPoint(m.mean, m.second);
    }
};

} // namespace

SplitResult split_interval(const PiecewiseFunction& phi, double eps, double eps1) {
    if (!(eps1 > eps && eps > 0.0))
        throw std::invalid_argument("split_interval: need 0 < eps < eps1");
    const double bound = eps1 * eps1;

    SplitState st;
    st.phi = &phi;
    const MomentTriple whole = moments(phi, 0.0, 1.0);
    st.x0 = BellmanPoint(whole.mean, whole.second);

    BellmanPoint xm = st.left_point(0.5), xp = st.right_point(0.5);
    const double rho_half = segment_gap_max(xm, xp);
    if (rho_half <= bound + kRhoTol)
        return SplitResult{0.5, xm, xp, rho_half, false};

    // Exactly one of the half-segments carries the violation.
    const bool right_side = segment_gap_max(xp, st.x0) > bound;
    const bool left_side = segment_gap_max(xm, st.x0) > bound;
    if (right_side == left_side)
        throw std::runtime_error(
            "split_interval: violation is not confined to one half-segment");

    auto rho = [&](double alpha) {
        const BellmanPoint xi = right_side ? st.right_point(alpha) : st.left_point(alpha);
        return segment_gap_max(xi, st.x0);
    };
    auto other_ok = [&](double alpha) {
        const BellmanPoint o = right_side ? st.left_point(alpha) : st.right_point(alpha);
        return segment_gap_max(o, st.x0) <= bound + kRhoTol;
    };

    // Move xi toward x0: alpha_plus up when xi = x+, down when xi = x-.
    double lo = 0.5; // rho(lo) > bound
    double hi = right_side ? 1.0 - 1e-15 : 1e-15;
    if (!(rho(hi) <= bound))
        throw std::runtime_error("split_interval: bracket endpoint failed sign condition");
    int it = 0;
    for (; it < kBisectionCap && std::abs(hi - lo) > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!other_ok(mid)) {
            std::ostringstream ss;
            ss << "split_interval: opposite half-segment left the enlarged strip at "
                  "iteration " << it;
            throw std::runtime_error(ss.str());
        }
        if (rho(mid) > bound)
            lo = mid;
        else
            hi = mid;
    }
    const double alpha = 0.5 * (lo + hi);
    xm = st.left_point(alpha);
    xp = st.right_point(alpha);
    const double rho_final = segment_gap_max(right_side ? xp : xm, st.x0);
    if (std::abs(rho_final - bound) > kRhoTol) {
        std::ostringstream ss;
        ss << "split_interval: bisection stalled, |rho - eps1^2| = "
           << std::abs(rho_final - bound) << " after " << it << " iterations";
        throw std::runtime_error(ss.str());
    }
    const double floor = std::sqrt(1.0 - (eps / eps1) * (eps / eps1));
    if (std::min(alpha, 1.0 - alpha) < floor - 1e-9) {
        std::ostringstream ss;
        ss << "split_interval: alpha_plus floor violated, min(a,1-a) = "
           << std::min(alpha, 1.0 - alpha) << " < " << floor;
        throw std::runtime_error(ss.str());
    }
    return SplitResult{alpha, xm, xp, rho_final, true};
}

} // namespace bmojn
