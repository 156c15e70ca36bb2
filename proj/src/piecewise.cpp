#include "bmojn/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bmojn {

namespace {

constexpr double kTileTol = 1e-12;

// Antiderivatives of the ramp gamma*log(a/t)+b, its square, and its
// exponential.  l(t) = log(a/t); t*l(t) and t*l(t)^2 vanish at t = 0.
double ramp_f1(const LogRamp& r, double t) {
    if (t == 0.0) return 0.0;
    const double l = std::log(r.a / t);
    return (r.gamma + r.b) * t + r.gamma * t * l;
}

double ramp_f2(const LogRamp& r, double t) {
    if (t == 0.0) return 0.0;
    const double l = std::log(r.a / t);
    const double g = r.gamma, b = r.b;
    return (2 * g * g + 2 * g * b + b * b) * t + g * g * t * l * l +
           2 * g * (b + g) * t * l;
}

// integral of exp(gamma*log(a/t)+b) = e^b (a/t)^gamma from u to v,
// 0 <= u < v.  Divergent iff u = 0 and gamma >= 1.
bool ramp_fe(const LogRamp& r, double u, double v, double& out) {
    const double g = r.gamma;
    if (u == 0.0 && g >= 1.0) return false;
    if (g == 1.0) {
        out = std::exp(r.b) * r.a * (std::log(v) - std::log(u));
        return true;
    }
    auto prim = [&](double t) {
        if (t == 0.0) return 0.0; // g < 1 here
        return std::exp(r.b + g * std::log(r.a) + (1.0 - g) * std::log(t)) / (1.0 - g);
    };
    out = prim(v) - prim(u);
    return true;
}

double pow2(int k) { return std::ldexp(1.0, k); }

} // namespace

// ---------------------------------------------------------------------------
// PiecewiseFunction
// ---------------------------------------------------------------------------

PiecewiseFunction::PiecewiseFunction(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty())
        throw std::invalid_argument("PiecewiseFunction: no segments");
    if (std::abs(segments_.front().lo) > kTileTol || std::abs(segments_.back().hi - 1.0) > kTileTol)
        throw std::invalid_argument("PiecewiseFunction: segments must tile (0,1]");
    segments_.front().lo = 0.0;
    segments_.back().hi = 1.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        Segment& s = segments_[i];
        if (!(s.lo < s.hi))
            throw std::invalid_argument("PiecewiseFunction: empty segment");
        if (i > 0) {
            if (std::abs(s.lo - segments_[i - 1].hi) > kTileTol)
                throw std::invalid_argument("PiecewiseFunction: segment endpoints must match");
            s.lo = segments_[i - 1].hi;
        }
        if (const auto* r = std::get_if<LogRamp>(&s.shape)) {
            if (!(r->a > 0.0) || s.hi > r->a + kTileTol)
                throw std::invalid_argument("PiecewiseFunction: LogRamp requires 0 < hi <= a");
        }
    }
}

PiecewiseFunction PiecewiseFunction::constant(double c) {
    return PiecewiseFunction({Segment{0.0, 1.0, Constant{c}}});
}

PiecewiseFunction PiecewiseFunction::log_ramp(double a, double b, double gamma) {
    if (!(a > 0.0) || a > 1.0)
        throw std::invalid_argument("log_ramp: a must lie in (0,1]");
    std::vector<Segment> segs;
    segs.push_back(Segment{0.0, a, LogRamp{gamma, a, b}});
    if (a < 1.0) segs.push_back(Segment{a, 1.0, Constant{b}});
    return PiecewiseFunction(std::move(segs));
}

double PiecewiseFunction::operator()(double t) const {
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("PiecewiseFunction: t outside (0,1]");
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                               [](const Segment& s, double x) { return s.hi < x; });
    const Segment& s = (it == segments_.end()) ? segments_.back() : *it;
    if (const auto* c = std::get_if<Constant>(&s.shape)) return c->c;
    const auto& r = std::get<LogRamp>(s.shape);
    return r.gamma * std::log(r.a / t) + r.b;
}

MomentTriple moments(const PiecewiseFunction& phi, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        throw std::invalid_argument("moments: need 0 <= lo < hi <= 1");
    double s1 = 0.0, s2 = 0.0, se = 0.0;
    bool exp_finite = true;
    for (const Segment& s : phi.segments()) {
        const double u = std::max(lo, s.lo), v = std::min(hi, s.hi);
        if (!(u < v)) continue;
        if (const auto* c = std::get_if<Constant>(&s.shape)) {
            const double len = v - u;
            s1 += c->c * len;
            s2 += c->c * c->c * len;
            se += std::exp(c->c) * len;
        } else {
            const auto& r = std::get<LogRamp>(s.shape);
            s1 += ramp_f1(r, v) - ramp_f1(r, u);
            s2 += ramp_f2(r, v) - ramp_f2(r, u);
            double e = 0.0;
            if (ramp_fe(r, u, v, e))
                se += e;
            else
                exp_finite = false;
        }
    }
    const double len = hi - lo;
    MomentTriple out;
    out.mean = s1 / len;
    out.second = s2 / len;
    out.exp_mean = exp_finite ? ExtendedValue::of(se / len) : ExtendedValue::infinity();
    return out;
}

// ---------------------------------------------------------------------------
// DyadicStepFunction
// ---------------------------------------------------------------------------

double DyadicPiece::left() const { return std::ldexp(static_cast<double>(pos), -level); }
double DyadicPiece::right() const { return std::ldexp(static_cast<double>(pos + 1), -level); }
double DyadicPiece::width() const { return std::ldexp(1.0, -level); }

DyadicStepFunction::DyadicStepFunction(int depth, std::vector<DyadicPiece> pieces)
    : depth_(depth), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw std::invalid_argument("DyadicStepFunction: no pieces");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const DyadicPiece& a, const DyadicPiece& b) { return a.left() < b.left(); });
    double cursor = 0.0;
    for (const DyadicPiece& p : pieces_) {
        if (p.level < 0 || p.level > 60)
            throw std::invalid_argument("DyadicStepFunction: piece level out of range");
        if (p.left() != cursor)
            throw std::invalid_argument("DyadicStepFunction: pieces must tile (0,1]");
        cursor = p.right();
    }
    if (cursor != 1.0)
        throw std::invalid_argument("DyadicStepFunction: pieces must end at 1");
}

DyadicStepFunction DyadicStepFunction::from_leaves(const std::vector<double>& leaves) {
    const std::size_t n = leaves.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("from_leaves: leaf count must be a power of two");
    int K = 0;
    while ((std::size_t{1} << K) < n) ++K;
    std::vector<DyadicPiece> pieces(n);
    for (std::size_t m = 0; m < n; ++m)
        pieces[m] = DyadicPiece{K, m, false, leaves[m], 0.0};
    return DyadicStepFunction(K, std::move(pieces));
}

bool DyadicStepFunction::has_stair() const {
    return std::any_of(pieces_.begin(), pieces_.end(),
                       [](const DyadicPiece& p) { return p.stair; });
}

namespace {

// Index of the piece containing t (pieces tile (0,1], keyed by right edge).
std::size_t piece_index(const std::vector<DyadicPiece>& pieces, double t) {
    std::size_t lo = 0, hi = pieces.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (pieces[mid].right() < t)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

// Block index of a staircase piece containing t: block i is
// (left + w 2^{-(i+1)}, left + w 2^{-i}].
int stair_block(const DyadicPiece& p, double t) {
    const double u = (t - p.left()) / p.width();
    int i = static_cast<int>(std::floor(-std::log2(u)));
    while (i > 0 && u > std::ldexp(1.0, -i)) --i;
    while (u <= std::ldexp(1.0, -(i + 1))) ++i;
    return i;
}

struct Sums {
    double s1 = 0.0, s2 = 0.0, se = 0.0;
    bool exp_finite = true;
    void add(const Sums& o) {
        s1 += o.s1;
        s2 += o.s2;
        se += o.se;
        exp_finite = exp_finite && o.exp_finite;
    }
    void add_const(double value, double len) {
        s1 += value * len;
        s2 += value * value * len;
        se += std::exp(value) * len;
    }
};

// Closed-form integrals over a full left-anchored staircase of width W
// whose rightmost block carries `first`:  mean = first + step,
// second moment = first^2 + 2 first step + 3 step^2,
// exp average = e^first / (2 - e^step)  (finite iff e^step < 2).
Sums stair_anchored_sums(double first, double step, double W) {
    Sums s;
    s.s1 = (first + step) * W;
    s.s2 = (first * first + 2 * first * step + 3 * step * step) * W;
    const double es = std::exp(step);
    if (es < 2.0)
        s.se = std::exp(first) / (2.0 - es) * W;
    else
        s.exp_finite = false;
    return s;
}

// Integrals of a staircase piece over (u, v], p.left() <= u < v <= p.right().
Sums stair_sums(const DyadicPiece& p, double u, double v) {
    Sums out;
    const double L = p.left(), w = p.width();
    if (u == L) {
        // smallest i with L + w 2^{-i} <= v
        int i_top = 0;
        while (L + std::ldexp(w, -i_top) > v) {
            ++i_top;
            if (i_top > 1100) throw std::runtime_error("stair_sums: block iteration overflow");
        }
        out.add(stair_anchored_sums(p.value + i_top * p.step, p.step, std::ldexp(w, -i_top)));
        const double cut = L + std::ldexp(w, -i_top);
        if (v > cut) out.add_const(p.value + (i_top - 1) * p.step, v - cut);
        return out;
    }
    for (int i = 0;; ++i) {
        const double bl = L + std::ldexp(w, -(i + 1));
        const double br = L + std::ldexp(w, -i);
        if (br <= u) break;
        if (bl < v) {
            const double a = std::max(u, bl), b = std::min(v, br);
            if (a < b) out.add_const(p.value + i * p.step, b - a);
        }
        if (i > 1100) throw std::runtime_error("stair_sums: block iteration overflow");
    }
    return out;
}

} // namespace

double DyadicStepFunction::operator()(double t) const {
    if (!(t > 0.0) || t > 1.0)
        throw std::invalid_argument("DyadicStepFunction: t outside (0,1]");
    const DyadicPiece& p = pieces_[piece_index(pieces_, t)];
    if (!p.stair) return p.value;
    return p.value + stair_block(p, t) * p.step;
}

std::vector<double> DyadicStepFunction::leaf_values(int K) const {
    if (K < 0 || K > 24)
        throw std::invalid_argument("leaf_values: K out of range");
    const std::uint64_t n = std::uint64_t{1} << K;
    std::vector<double> out(n);
    const double w = pow2(-K);
    for (std::uint64_t m = 0; m < n; ++m) out[m] = (*this)((m + 1) * w);
    return out;
}

MomentTriple moments(const DyadicStepFunction& phi, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
        throw std::invalid_argument("moments: need 0 <= lo < hi <= 1");
    Sums total;
    for (const DyadicPiece& p : phi.pieces()) {
        const double u = std::max(lo, p.left()), v = std::min(hi, p.right());
        if (!(u < v)) continue;
        if (p.stair)
            total.add(stair_sums(p, u, v));
        else
            total.add_const(p.value, v - u);
    }
    const double len = hi - lo;
    MomentTriple out;
    out.mean = total.s1 / len;
    out.second = total.s2 / len;
    out.exp_mean =
        total.exp_finite ? ExtendedValue::of(total.se / len) : ExtendedValue::infinity();
    return out;
}

// ---------------------------------------------------------------------------
// Dyadic BMO norm: one bottom-up lattice pass.  Nodes inside a staircase
// piece are not expanded; a left-anchored node contributes the exact
// closed-form variance 2 step^2, any other node inside a piece is constant.
// ---------------------------------------------------------------------------

namespace {

struct NormState {
    const std::vector<DyadicPiece>* pieces;
    double best = 0.0;
    int best_level = 0;
    std::uint64_t best_pos = 0;

    void offer(double var, int level, std::uint64_t pos) {
        if (var > best) {
            best = var;
            best_level = level;
            best_pos = pos;
        }
    }

    // Returns (sum, sumsq) over the node (pos 2^-level, (pos+1) 2^-level].
    Sums visit(int level, std::uint64_t pos) {
        const double ln = std::ldexp(static_cast<double>(pos), -level);
        const double wn = std::ldexp(1.0, -level);
        const double rn = std::ldexp(static_cast<double>(pos + 1), -level);
        const DyadicPiece& p = (*pieces)[piece_index(*pieces, ln + wn * 0.5)];
        if (p.right() >= rn) { // node inside one piece
            Sums s;
            if (!p.stair) {
                s.add_const(p.value, wn);
                return s;
            }
            if (ln == p.left()) {
                const int i0 = level - p.level;
                const double first = p.value + i0 * p.step;
                s = stair_anchored_sums(first, p.step, wn);
                offer(2.0 * p.step * p.step, level, pos);
                return s;
            }
            s.add_const(p.value + stair_block(p, rn) * p.step, wn);
            return s;
        }
        Sums s = visit(level + 1, 2 * pos);
        s.add(visit(level + 1, 2 * pos + 1));
        const double mean = s.s1 / wn;
        offer(s.s2 / wn - mean * mean, level, pos);
        return s;
    }
};

} // namespace

DyadicNormReport bmo_norm_dyadic_report(const DyadicStepFunction& phi, int max_depth) {
    (void)max_depth; // recursion is bounded by the piece structure itself
    NormState st;
    st.pieces = &phi.pieces();
    st.visit(0, 0);
    return DyadicNormReport{st.best, st.best_level, st.best_pos};
}

double bmo_norm_dyadic(const DyadicStepFunction& phi, int max_depth) {
    return std::sqrt(std::max(0.0, bmo_norm_dyadic_report(phi, max_depth).norm_sq));
}

// ---------------------------------------------------------------------------
// Continuous BMO norm
// ---------------------------------------------------------------------------

namespace {

double variance_on(const PiecewiseFunction& phi, double c, double d) {
    const MomentTriple m = moments(phi, c, d);
    return m.second - m.mean * m.mean;
}

} // namespace

double bmo_norm_continuous(const PiecewiseFunction& phi) {
    int ramps = 0;
    for (const Segment& s : phi.segments())
        if (std::holds_alternative<LogRamp>(s.shape)) ++ramps;
    if (ramps > 1)
        throw std::invalid_argument("bmo_norm_continuous: at most one LogRamp supported");

    double best = variance_on(phi, 0.0, 1.0);

    // Analytic candidates: the ramp's own limit value gamma^2 (attained as
    // c,d -> 0 when the ramp touches 0), and every boundary pair.
    std::vector<double> bounds{0.0};
    for (const Segment& s : phi.segments()) {
        bounds.push_back(s.hi);
        if (const auto* r = std::get_if<LogRamp>(&s.shape))
            if (s.lo == 0.0) best = std::max(best, r->gamma * r->gamma);
    }
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i)
        for (std::size_t j = i + 1; j < bounds.size(); ++j)
            best = std::max(best, variance_on(phi, bounds[i], bounds[j]));

    // Safety-net grid with three refinement rounds.
    const int n = 256;
    double c_lo = 0.0, c_hi = 1.0, d_lo = 0.0, d_hi = 1.0;
    double bc = 0.0, bd = 1.0;
    for (int round = 0; round < 4; ++round) {
        double round_best = -1.0;
        for (int i = 0; i <= n; ++i) {
            const double c = c_lo + (c_hi - c_lo) * i / n;
            for (int j = 0; j <= n; ++j) {
                const double d = d_lo + (d_hi - d_lo) * j / n;
                if (d - c < 1e-9 || c < 0.0 || d > 1.0) continue;
                const double v = variance_on(phi, c, d);
                if (v > round_best) {
                    round_best = v;
                    bc = c;
                    bd = d;
                }
            }
        }
        best = std::max(best, round_best);
        const double hc = (c_hi - c_lo) / n * 4.0, hd = (d_hi - d_lo) / n * 4.0;
        c_lo = std::max(0.0, bc - hc);
        c_hi = std::min(1.0, bc + hc);
        d_lo = std::max(0.0, bd - hd);
        d_hi = std::min(1.0, bd + hd);
    }
    return std::sqrt(std::max(0.0, best));
}

std::vector<int> dyadic_digits(double alpha, int n_digits) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("dyadic_digits: alpha must lie in [0,1]");
    std::vector<int> bits(static_cast<std::size_t>(std::max(0, n_digits)));
    double z = alpha;
    for (int k = 0; k < n_digits; ++k) {
        if (z >= 0.5) {
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
