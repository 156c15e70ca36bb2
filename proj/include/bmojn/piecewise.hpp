#ifndef BMOBMOJN_PIECEWISE_HPP
#define BMOBMOJN_PIECEWISE_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "bmojn/types.hpp"

namespace bmojn {

// ---------------------------------------------------------------------------
// Functions on (0,1] as ordered segments, each constant or a logarithmic
// ramp gamma*log(a/t)+b.  All moments are computed from antiderivatives,
// never by quadrature.
// ---------------------------------------------------------------------------

struct Constant {
    double c;
};

/// value(t) = gamma*log(a/t) + b.  Only valid on segments with hi <= a,
/// so log(a/t) >= 0 throughout.
struct LogRamp {
    double gamma;
    double a;
    double b;
};

struct Segment {
    double lo, hi; // covers (lo, hi]
    std::variant<Constant, LogRamp> shape;
};

class PiecewiseFunction {
public:
    /// Validates that the segments tile (0,1] with matching endpoints and
    /// that every LogRamp satisfies 0 < hi <= a.
    explicit PiecewiseFunction(std::vector<Segment> segments);

    static PiecewiseFunction constant(double c);
    /// The two-piece test function: gamma*log(a/t)+b on (0,a], b on (a,1].
    /// With a = 1 the whole interval is the ramp.
    static PiecewiseFunction log_ramp(double a, double b, double gamma);

    double operator()(double t) const;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    std::vector<Segment> segments_;
};

// ---------------------------------------------------------------------------
// Step functions on the dyadic lattice over (0,1].
//
// Stored as a sorted list of disjoint dyadic pieces that tile (0,1].  A
// piece is the interval (pos*2^-level, (pos+1)*2^-level] carrying either a
// constant or an infinite arithmetic staircase: sub-block i of a staircase
// piece is the dyadic interval (left + w*2^-(i+1), left + w*2^-i] (w the
// piece width) with value first + i*step, accumulating at the piece's left
// endpoint.  The staircase phi0 is one such piece spanning all of (0,1];
// the rearranged extremizers place one per digit-1 block.  Closed-form
// sums keep moments, exponential averages and the dyadic norm exact.
// ---------------------------------------------------------------------------

struct DyadicPiece {
    int level = 0;
    std::uint64_t pos = 0;
    bool stair = false;
    double value = 0.0; // constant value, or "first" for a staircase
    double step = 0.0;  // increment per halving (staircase only)

    double left() const;
    double right() const;
    double width() const;
};

class DyadicStepFunction {
public:
    /// depth: the finest structural level of the explicit pieces (staircase
    /// pieces continue below it analytically).
    DyadicStepFunction(int depth, std::vector<DyadicPiece> pieces);

    /// Dense constructor: 2^K leaves, leaves[m] on (m*2^-K, (m+1)*2^-K].
    static DyadicStepFunction from_leaves(const std::vector<double>& leaves);

    double operator()(double t) const;
    int depth() const { return depth_; }
    const std::vector<DyadicPiece>& pieces() const { return pieces_; }

    /// Leaf values at resolution K (requires K <= 24 and no staircase piece
    /// below level K; intended for export of small functions).
    std::vector<double> leaf_values(int K) const;

    bool has_stair() const;

private:
    int depth_;
    std::vector<DyadicPiece> pieces_;
};

/// First and second moments plus the exponential average over an interval.
struct MomentTriple {
    double mean = 0.0;
    double second = 0.0;
    ExtendedValue exp_mean = ExtendedValue::of(1.0);
};

MomentTriple moments(const PiecewiseFunction& phi, double lo, double hi);
MomentTriple moments(const DyadicStepFunction& phi, double lo, double hi);

/// sup over subintervals [c,d] of (0,1] of the variance, square-rooted.
/// Closed-form candidates (the ramp limit gamma^2, all boundary pairs) are
/// combined with an adaptive 256^2 grid refined three times.
double bmo_norm_continuous(const PiecewiseFunction& phi);

/// sup over dyadic J of the variance, square-rooted.  One bottom-up lattice
/// pass; staircase pieces contribute their exact closed-form 2*step^2 on
/// every left-anchored subinterval, so no truncation occurs.
double bmo_norm_dyadic(const DyadicStepFunction& phi, int max_depth);

/// Norm together with the attaining dyadic interval (for diagnostics).
struct DyadicNormReport {
    double norm_sq = 0.0;
    int level = 0;
    std::uint64_t pos = 0;
};
DyadicNormReport bmo_norm_dyadic_report(const DyadicStepFunction& phi, int max_depth);

/// First n_digits binary digits of alpha in [0,1]; exact dyadics end in zeros.
std::vector<int> dyadic_digits(double alpha, int n_digits);

} // namespace bmojn

#endif
