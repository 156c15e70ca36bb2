#include "bmojn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bmojn/constants.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmojn {

namespace {
const double kSqrt2 = std::sqrt(2.0);

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

double midpoint_gap(double a, double a_minus, double a_plus, double theta, double delta,
                    Sign sign) {
    (void)delta; // the formula depends on delta only through its arguments
    if (sign == Sign::plus)
        return 2.0 * (1.0 - a) * std::exp(a) -
               (1.0 - a_minus) * std::exp(-theta + a_minus) -
               (1.0 - a_plus) * std::exp(theta + a_plus);
    return 2.0 * (1.0 + a) * std::exp(-a) -
           (1.0 + a_minus) * std::exp(-theta - a_minus) -
           (1.0 + a_plus) * std::exp(theta - a_plus);
}

double slide_profile(double theta, double delta, double eps, Sign sign) {
    const double cap = eps / kSqrt2;
    if (theta < -1e-12 || theta > cap + 1e-12)
        throw std::domain_error("slide_profile: theta outside [0, eps/sqrt2]");
    theta = std::min(std::max(theta, 0.0), cap);
    const double r1 = std::sqrt(std::max(0.0, delta * delta - eps * eps));
    const double a =
        std::sqrt(std::max(0.0, delta * delta - 0.5 * eps * eps - theta * theta));
    if (sign == Sign::plus) return midpoint_gap(a, delta, r1, theta, delta, Sign::plus);
    return midpoint_gap(a, r1, delta, theta, delta, Sign::minus);
}

// ---------------------------------------------------------------------------
// Constrained scan.  (a, a-, theta) are gridded, a+ is solved from
// a-^2 + a+^2 = 2a^2 + 2 theta^2; the best cell is refined twice at 8x zoom.
// Candidates are ordered so ties resolve deterministically (smallest flat
// index wins), which also makes the parallel and serial variants identical.
// ---------------------------------------------------------------------------

namespace {

struct ScanBest {
    double value;
    long index;
    std::array<double, 4> arg;
};

struct ScanRanges {
    double a_lo, a_hi, m_lo, m_hi, t_lo, t_hi;
};

// Evaluates cell (ia, im, it); returns false when infeasible.
bool scan_cell(long ia, long im, long it, int n, const ScanRanges& rg, double r1,
               double delta, Sign sign, double& value, std::array<double, 4>& arg) {
    auto coord = [n](double lo, double hi, long i) {
        return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    };
    const double a = coord(rg.a_lo, rg.a_hi, ia);
    const double am = coord(rg.m_lo, rg.m_hi, im);
    const double th = coord(rg.t_lo, rg.t_hi, it);
    const double ap2 = 2.0 * a * a + 2.0 * th * th - am * am;
    if (ap2 < r1 * r1 - 1e-12 || ap2 > delta * delta + 1e-12) return false;
    const double ap = std::sqrt(std::max(0.0, ap2));
    if (sign == Sign::plus ? (ap > am + 1e-12) : (ap < am - 1e-12)) return false;
    value = midpoint_gap(a, am, ap, th, delta, sign);
    arg = {a, am, ap, th};
    return true;
}

bool better(Sign sign, double challenger, long ci, double incumbent, long ii) {
    if (challenger == incumbent) return ci < ii;
    return sign == Sign::plus ? challenger < incumbent : challenger > incumbent;
}

ScanReport scan_impl(double delta, double eps, Sign sign, int grid, bool parallel) {
    if (!(eps > 0.0) || eps > delta)
        throw std::domain_error("scan_constraint_set: need 0 < eps <= delta");
    if (grid < 4) throw std::invalid_argument("scan_constraint_set: grid too small");
    const double r1 = std::sqrt(std::max(0.0, delta * delta - eps * eps));
    const int n = grid;

    // The designated corner is always an explicit candidate.
    std::array<double, 4> corner = sign == Sign::plus
                                       ? std::array<double, 4>{r1, delta, r1, eps / kSqrt2}
                                       : std::array<double, 4>{r1, r1, delta, eps / kSqrt2};
    const double corner_value =
        midpoint_gap(corner[0], corner[1], corner[2], corner[3], delta, sign);

    ScanRanges rg{r1, delta, r1, delta, 0.0, eps};
    ScanBest best{corner_value, -1, corner};
    bool any = false;

    for (int round = 0; round < 3; ++round) {
        ScanBest round_best{0.0, std::numeric_limits<long>::max(), {}};
        bool round_any = false;
        const long total = static_cast<long>(n) * n * n;

        if (parallel) {
#ifdef _OPENMP
#pragma omp parallel
            {
                ScanBest local{0.0, std::numeric_limits<long>::max(), {}};
                bool local_any = false;
#pragma omp for schedule(static)
                for (long flat = 0; flat < total; ++flat) {
                    double v;
                    std::array<double, 4> arg;
                    if (!scan_cell(flat / (n * n), (flat / n) % n, flat % n, n, rg, r1,
                                   delta, sign, v, arg))
                        continue;
                    if (!local_any || better(sign, v, flat, local.value, local.index)) {
                        local = {v, flat, arg};
                        local_any = true;
                    }
                }
#pragma omp critical
                {
                    if (local_any &&
                        (!round_any ||
                         better(sign, local.value, local.index, round_best.value,
                                round_best.index))) {
                        round_best = local;
                        round_any = true;
                    }
                }
            }
#else
            parallel = false;
#endif
        }
        if (!parallel) {
            for (long flat = 0; flat < total; ++flat) {
                double v;
                std::array<double, 4> arg;
                if (!scan_cell(flat / (n * n), (flat / n) % n, flat % n, n, rg, r1, delta,
                               sign, v, arg))
                    continue;
                if (!round_any || better(sign, v, flat, round_best.value, round_best.index)) {
                    round_best = {v, flat, arg};
                    round_any = true;
                }
            }
        }
        if (!round_any) break;
        any = true;
        if (better(sign, round_best.value, 0, best.value, 0)) best = round_best;

        // zoom: the next window is 8 cells wide around the best cell
        auto window = [n](double lo, double hi, double center) {
            const double h = (hi - lo) / (n - 1) * 4.0;
            return std::array<double, 2>{std::max(lo, center - h), std::min(hi, center + h)};
        };
        const auto wa = window(rg.a_lo, rg.a_hi, round_best.arg[0]);
        const auto wm = window(rg.m_lo, rg.m_hi, round_best.arg[1]);
        const auto wt = window(rg.t_lo, rg.t_hi, round_best.arg[3]);
        rg = ScanRanges{wa[0], wa[1], wm[0], wm[1], wt[0], wt[1]};
    }
    (void)any; // the corner is always feasible, so the candidate set is never empty

    ScanReport rep;
    rep.extremum = best.value;
    rep.argument = std::abs(corner_value - best.value) <= 1e-9 ? corner : best.arg;
    rep.grid_size = grid;
    rep.refined = true;

    const double g = g_function(delta, eps, sign);
    const double expected = sign == Sign::plus ? std::min(0.0, g) : std::max(0.0, g);
    if (std::abs(rep.extremum - expected) > 1e-6) {
        std::ostringstream ss;
        ss << "scan_constraint_set: extremum " << rep.extremum
           << " disagrees with min/max{0, g} = " << expected;
        throw std::runtime_error(ss.str());
    }
    return rep;
}

} // namespace

ScanReport scan_constraint_set(double delta, double eps, Sign sign, int grid) {
    return scan_impl(delta, eps, sign, grid, true);
}

ScanReport scan_constraint_set_serial(double delta, double eps, Sign sign, int grid) {
    return scan_impl(delta, eps, sign, grid, false);
}

// ---------------------------------------------------------------------------
// Bellman induction down the dyadic lattice
// ---------------------------------------------------------------------------

InductionChain bellman_induction(const DyadicStepFunction& phi, double eps, Sign sign,
                                 int max_depth) {
    if (max_depth < 0 || max_depth > 20)
        throw std::invalid_argument("bellman_induction: max_depth out of range");
    const DyadicNormReport norm = bmo_norm_dyadic_report(phi, max_depth);
    if (std::sqrt(std::max(0.0, norm.norm_sq)) > eps + 1e-9) {
        std::ostringstream ss;
        ss << "bellman_induction: dyadic norm " << std::sqrt(norm.norm_sq)
           << " exceeds eps = " << eps << " on the interval (" << norm.pos << "*2^-"
           << norm.level << ", " << norm.pos + 1 << "*2^-" << norm.level << "]";
        throw std::invalid_argument(ss.str());
    }
    const double delta = delta_root(eps, sign).root;

    InductionChain chain;
    const ExtendedValue em = moments(phi, 0.0, 1.0).exp_mean;
    chain.target = em.finite ? em.value : std::numeric_limits<double>::infinity();
    chain.levels.reserve(max_depth + 1);
    for (int nlev = 0; nlev <= max_depth; ++nlev) {
        const std::uint64_t count = std::uint64_t{1} << nlev;
        const double w = std::ldexp(1.0, -nlev);
        double sum = 0.0;
        for (std::uint64_t m = 0; m < count; ++m) {
            const MomentTriple mom = moments(phi, m * w, (m + 1) * w);
            sum += bellman_value(BellmanPoint(mom.mean, mom.second), delta, sign).get();
        }
        chain.levels.push_back(InductionLevel{nlev, sum * w});
    }
    for (std::size_t i = 1; i < chain.levels.size(); ++i) {
        const double step = chain.levels[i].value - chain.levels[i - 1].value;
        if (signum(sign) * step > 1e-12) {
            std::ostringstream ss;
            ss << "bellman_induction: chain not monotone at depth " << i << " (step "
               << step << ")";
            throw std::runtime_error(ss.str());
        }
    }
    const double last = chain.levels.back().value;
    if (signum(sign) * (chain.target - last) > 1e-10) {
        std::ostringstream ss;
        ss << "bellman_induction: final level " << last << " fails to bound the target "
           << chain.target;
        throw std::runtime_error(ss.str());
    }
    return chain;
}

// ---------------------------------------------------------------------------
// Brute-force sharpness oracle
// ---------------------------------------------------------------------------

namespace {

// Complete binary tree of (sum, sumsq) over the leaves; node 1 is the root.
struct MomentTree {
    int n_leaves;
    std::vector<double> sum, sumsq;

    explicit MomentTree(const std::vector<double>& v)
        : n_leaves(static_cast<int>(v.size())), sum(2 * v.size()), sumsq(2 * v.size()) {
        for (int i = 0; i < n_leaves; ++i) {
            sum[n_leaves + i] = v[i];
            sumsq[n_leaves + i] = v[i] * v[i];
        }
        for (int i = n_leaves - 1; i >= 1; --i) {
            sum[i] = sum[2 * i] + sum[2 * i + 1];
            sumsq[i] = sumsq[2 * i] + sumsq[2 * i + 1];
        }
    }

    int leaves_under(int node) const {
        int span = 1;
        while (node < n_leaves) {
            node *= 2;
            span *= 2;
        }
        return span;
    }

    double node_var(int node, int span) const {
        const double m = sum[node] / span;
        return sumsq[node] / span - m * m;
    }

    bool feasible(double cap) const {
        for (int node = 1; node < n_leaves; ++node)
            if (node_var(node, leaves_under(node)) > cap) return false;
        return true;
    }

    void set_leaf(int i, double v) {
        int node = n_leaves + i;
        const double ds = v - sum[node], dq = v * v - sumsq[node];
        for (; node >= 1; node /= 2) {
            sum[node] += ds;
            sumsq[node] += dq;
        }
    }

    // Would replacing leaves idx[j] by vals[j] keep every node variance <= cap?
    bool feasible_after(const std::array<int, 3>& idx, const std::array<double, 3>& vals,
                        double cap) const {
        // ancestors of the three leaves, with summed deltas
        std::array<int, 64> nodes{};
        std::array<double, 64> dsum{}, dsq{};
        int used = 0;
        for (int j = 0; j < 3; ++j) {
            const double ds = vals[j] - sum[n_leaves + idx[j]];
            const double dq = vals[j] * vals[j] - sumsq[n_leaves + idx[j]];
            for (int node = (n_leaves + idx[j]) / 2; node >= 1; node /= 2) {
                int slot = -1;
                for (int u = 0; u < used; ++u)
                    if (nodes[u] == node) {
                        slot = u;
                        break;
                    }
                if (slot < 0) {
                    slot = used++;
                    nodes[slot] = node;
                    dsum[slot] = 0.0;
                    dsq[slot] = 0.0;
                }
                dsum[slot] += ds;
                dsq[slot] += dq;
            }
        }
        for (int u = 0; u < used; ++u) {
            const int span = leaves_under(nodes[u]);
            const double m = (sum[nodes[u]] + dsum[u]) / span;
            if ((sumsq[nodes[u]] + dsq[u]) / span - m * m > cap) return false;
        }
        return true;
    }
};

// Projects raw leaf values onto the exact two-moment set.
bool project_moments(std::vector<double>& v, double x1, double spread) {
    const int n = static_cast<int>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= n;
    if (var < 1e-28) return false;
    const double scale = spread / std::sqrt(var);
    for (double& x : v) x = x1 + scale * (x - mean);
    return true;
}

std::vector<double> alternating_start(int n, double x1, double spread) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? x1 + spread : x1 - spread;
    return v;
}

struct OracleProblem {
    double x1, spread, cap;
    int depth;
};

double run_restart(const OracleProblem& pr, int restart, std::uint64_t seed, long budget) {
    const int n = 1 << pr.depth;
    std::mt19937_64 rng(splitmix64(seed ^ (0x5851f42d4c957f2dULL * (restart + 1))));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> v;
    if (restart == 0) {
        v = alternating_start(n, pr.x1, pr.spread);
    } else if (restart == 1) {
        // truncated-staircase pattern: blocks carry rising values toward 0
        std::vector<double> raw(n);
        for (int m = 1; m < n; ++m) {
            int j = pr.depth - 1;
            for (int q = m; q > 1; q /= 2) --j;
            raw[m] = j - 1.0;
        }
        raw[0] = pr.depth + 0.5;
        v = raw;
        if (!project_moments(v, pr.x1, pr.spread)) v = alternating_start(n, pr.x1, pr.spread);
    } else {
        std::vector<double> raw(n);
        for (double& x : raw) x = unit(rng) - 0.5;
        v = raw;
        if (!project_moments(v, pr.x1, pr.spread)) v = alternating_start(n, pr.x1, pr.spread);
    }

    // repair an infeasible start by blending toward the alternating one
    {
        MomentTree probe(v);
        if (!probe.feasible(pr.cap)) {
            const std::vector<double> alt = alternating_start(n, pr.x1, pr.spread);
            for (double lam : {0.25, 0.5, 0.75, 1.0}) {
                std::vector<double> mix(n);
                for (int i = 0; i < n; ++i) mix[i] = (1 - lam) * v[i] + lam * alt[i];
                if (!project_moments(mix, pr.x1, pr.spread)) continue;
                MomentTree t2(mix);
                if (t2.feasible(pr.cap)) {
                    v = mix;
                    break;
                }
            }
            if (!MomentTree(v).feasible(pr.cap)) v = alt;
        }
    }

    MomentTree tree(v);
    double exp_sum = 0.0;
    for (double x : v) exp_sum += std::exp(x);

    if (n < 3) return exp_sum / n;

    // three-leaf rotations preserve both moments exactly
    const double ux = 1.0 / std::sqrt(2.0), wy = 1.0 / std::sqrt(6.0);
    long evals = 0;
    while (evals < budget) {
        int i = static_cast<int>(unit(rng) * n) % n;
        int j = static_cast<int>(unit(rng) * n) % n;
        int k = static_cast<int>(unit(rng) * n) % n;
        if (i == j || j == k || i == k) {
            ++evals;
            continue;
        }
        const double vi = v[i], vj = v[j], vk = v[k];
        const double c = (vi + vj + vk) / 3.0;
        const double a0 = (vi - vj) * ux;
        const double b0 = (vi + vj - 2.0 * vk) * wy;
        const double rad = std::sqrt(a0 * a0 + b0 * b0);
        if (rad < 1e-12) {
            ++evals;
            continue;
        }
        const double phi0 = std::atan2(b0, a0);
        const double base = std::exp(vi) + std::exp(vj) + std::exp(vk);
        double best_gain = 1e-14;
        std::array<double, 3> best_vals{};
        bool found = false;
        for (int q = 0; q < 8 && evals < budget; ++q) {
            ++evals;
            const double phi =
                phi0 + (q < 4 ? (q + 1) * 0.78539816339744831
                              : (unit(rng) * 2.0 - 1.0) * 3.14159265358979324);
            const double ca = rad * std::cos(phi), cb = rad * std::sin(phi);
            const std::array<double, 3> cand{c + ca * ux + cb * wy, c - ca * ux + cb * wy,
                                             c - 2.0 * cb * wy};
            const double gain =
                std::exp(cand[0]) + std::exp(cand[1]) + std::exp(cand[2]) - base;
            if (gain <= best_gain) continue;
            if (!tree.feasible_after({i, j, k}, cand, pr.cap)) continue;
            best_gain = gain;
            best_vals = cand;
            found = true;
        }
        if (found) {
            exp_sum += best_gain;
            tree.set_leaf(i, best_vals[0]);
            tree.set_leaf(j, best_vals[1]);
            tree.set_leaf(k, best_vals[2]);
            v[i] = best_vals[0];
            v[j] = best_vals[1];
            v[k] = best_vals[2];
        }
    }

    // final exact re-projection and strict feasibility check
    if (project_moments(v, pr.x1, pr.spread)) {
        MomentTree fin(v);
        if (fin.feasible(pr.cap)) {
            double s = 0.0;
            for (double x : v) s += std::exp(x);
            return s / n;
        }
    }
    return std::exp(pr.x1); // the constant is always feasible
}

double oracle_impl(const BellmanPoint& p, double eps, int depth, long budget,
                   std::uint64_t seed, bool parallel) {
    if (depth < 1 || depth > 6)
        throw std::invalid_argument("brute_force_oracle: depth must lie in [1,6]");
    if (!(eps > 0.0) || !ParabolicStrip(eps).contains(p))
        throw std::domain_error("brute_force_oracle: point outside the eps strip");
    const double spread_sq = std::max(0.0, p.x2 - p.x1 * p.x1);
    if (spread_sq == 0.0) return std::exp(p.x1);

    OracleProblem pr{p.x1, std::sqrt(spread_sq), eps * eps + 1e-12, depth};
    const int restarts = 8;
    const long per = std::max<long>(1, budget / restarts);
    std::vector<double> results(restarts);

    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < restarts; ++r) results[r] = run_restart(pr, r, seed, per);
#else
        for (int r = 0; r < restarts; ++r) results[r] = run_restart(pr, r, seed, per);
#endif
    } else {
        for (int r = 0; r < restarts; ++r) results[r] = run_restart(pr, r, seed, per);
    }
    return *std::max_element(results.begin(), results.end());
}

} // namespace

double brute_force_oracle(const BellmanPoint& p, double eps, int depth, long budget,
                          std::uint64_t seed) {
    return oracle_impl(p, eps, depth, budget, seed, true);
}

double brute_force_oracle_serial(const BellmanPoint& p, double eps, int depth, long budget,
                                 std::uint64_t seed) {
    return oracle_impl(p, eps, depth, budget, seed, false);
}

// ---------------------------------------------------------------------------
// Finite-difference validation of the closed-form derivatives
// ---------------------------------------------------------------------------

double hessian_fd_check(const BellmanPoint& p, double delta, Sign sign, double h) {
    const double gap = vertical_gap(p, delta);
    if (!(gap > 10.0 * h))
        throw std::domain_error("hessian_fd_check: gap must exceed 10h");
    const BellmanDerivatives ana = bellman_derivatives(p, delta, sign);

    // raw closed form, valid slightly below the bottom boundary too
    const double sg = signum(sign);
    auto b = [&](double x1, double x2) {
        const double g = std::sqrt(delta * delta + x1 * x1 - x2);
        return (1.0 - sg * g) / (1.0 - sg * delta) * std::exp(x1 + sg * (g - delta));
    };
    const double x1 = p.x1, x2 = p.x2;
    const double b0 = b(x1, x2);
    const double g1 = (b(x1 + h, x2) - b(x1 - h, x2)) / (2.0 * h);
    const double g2 = (b(x1, x2 + h) - b(x1, x2 - h)) / (2.0 * h);
    const double h11 = (b(x1 + h, x2) - 2.0 * b0 + b(x1 - h, x2)) / (h * h);
    const double h22 = (b(x1, x2 + h) - 2.0 * b0 + b(x1, x2 - h)) / (h * h);
    const double h12 = (b(x1 + h, x2 + h) - b(x1 + h, x2 - h) - b(x1 - h, x2 + h) +
                        b(x1 - h, x2 - h)) /
                       (4.0 * h * h);

    // discrepancies are measured relative to the gradient/Hessian magnitude,
    // so entries crossing zero (the rank-one kernel direction) do not blow up
    const double gscale =
        std::max({std::abs(ana.grad[0]), std::abs(ana.grad[1]), 1e-12});
    const double hscale =
        std::max({std::abs(ana.h11), std::abs(ana.h12), std::abs(ana.h22), 1e-12});
    double worst = std::abs(g1 - ana.grad[0]) / gscale;
    worst = std::max(worst, std::abs(g2 - ana.grad[1]) / gscale);
    worst = std::max(worst, std::abs(h11 - ana.h11) / hscale);
    worst = std::max(worst, std::abs(h12 - ana.h12) / hscale);
    worst = std::max(worst, std::abs(h22 - ana.h22) / hscale);
    return worst;
}

} // namespace bmojn
