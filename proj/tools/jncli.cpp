// Command-line front end: constants tables, pointwise Bellman evaluation,
// extremizer export, verification suites, and eps-sweeps (CSV/JSON).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "bmojn/bellman.hpp"
#include "bmojn/constants.hpp"
#include "bmojn/domain.hpp"
#include "bmojn/extremal.hpp"
#include "bmojn/piecewise.hpp"
#include "bmojn/serialize.hpp"
#include "bmojn/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using bmojn::BellmanPoint;
using bmojn::ExtendedValue;
using bmojn::Sign;
using nlohmann::json;

std::string fmt15(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
}

Sign parse_sign(const std::string& s) {
    if (s == "plus") return Sign::plus;
    if (s == "minus") return Sign::minus;
    throw std::invalid_argument("sign must be plus or minus");
}

json value_record(const char* quantity, double eps, const ExtendedValue& v,
                  bool conjectural, const char* formula) {
    json j{{"quantity", quantity}, {"eps", eps},        {"units", "dimensionless"},
           {"conjectural", conjectural}, {"formula", formula}, {"infinite", !v.finite}};
    if (v.finite)
        j["value"] = v.value;
    else
        j["value"] = nullptr;
    return j;
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

int run_constants(const std::string& setting, double eps, int dim,
                  const std::string& format, const std::string& out_path) {
    json records = json::array();
    std::string plain;
    if (setting == "continuous") {
        const ExtendedValue c = bmojn::c_continuous(eps);
        plain = c.finite ? "C(eps) = " + fmt15(c.value) : "infinite (eps >= 1)";
        records.push_back(value_record("C", eps, c, false, "exp(-eps)/(1-eps)"));
    } else if (setting == "dyadic") {
        const ExtendedValue c = bmojn::c_dyadic(eps);
        plain = c.finite ? "C_d(eps) = " + fmt15(c.value)
                         : "infinite (eps >= sqrt(2)*log(2))";
        records.push_back(value_record("C_d", eps, c, false,
                                       "exp(-eps/sqrt2)/(2-exp(eps/sqrt2))"));
    } else if (setting == "conjectured") {
        const bmojn::ConjecturedNd c = bmojn::conjectured_nd(eps, dim);
        plain = "CONJECTURAL (n = " + std::to_string(dim) + ")\n";
        plain += c.c_nd.finite ? "C_d_n(eps) = " + fmt15(c.c_nd.value)
                               : std::string("C_d_n(eps) infinite (eps >= eps0_n)");
        plain += "\neps0_n = " + fmt15(c.eps0_nd);
        plain += "\ndelta_plus_n = " +
                 (std::isnan(c.delta_plus_nd) ? std::string("n/a") : fmt15(c.delta_plus_nd));
        plain += "\ndelta_minus_n = " + fmt15(c.delta_minus_nd);
        records.push_back(value_record("C_d_n", eps, c.c_nd, true,
                                       "(2^n-1)exp(-eps*2^(-n/2))/(2^n-exp((2^(n/2)-2^(-n/2))eps))"));
        records.back()["n"] = dim;
        records.back()["eps0_n"] = c.eps0_nd;
        if (!std::isnan(c.delta_plus_nd)) records.back()["delta_plus_n"] = c.delta_plus_nd;
        records.back()["delta_minus_n"] = c.delta_minus_nd;
    } else {
        throw std::invalid_argument("setting must be continuous, dyadic or conjectured");
    }

    if (format == "json") {
        emit(records.size() == 1 ? records[0].dump(2) + "\n" : records.dump(2) + "\n",
             out_path);
    } else if (format == "csv") {
        std::string text = "quantity,eps,value,infinite,conjectural\n";
        for (const json& r : records) {
            text += csv_quote(r["quantity"].get<std::string>()) + "," + fmt15(eps) + ",";
            text += r["value"].is_null() ? "" : fmt15(r["value"].get<double>());
            text += std::string(",") + (r["infinite"].get<bool>() ? "1" : "0") + ",";
            text += r["conjectural"].get<bool>() ? "CONJECTURAL" : "";
            text += "\n";
        }
        emit(text, out_path);
    } else {
        emit(plain + "\n", out_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const std::string& setting, const std::string& sign_s, double eps, double x1,
             double x2, int dim, const std::string& format, const std::string& out_path) {
    const Sign sign = parse_sign(sign_s);
    const BellmanPoint p(x1, x2);
    double delta = eps;
    bool conjectural = false;
    if (setting == "dyadic") {
        delta = bmojn::delta_root(eps, sign).root;
    } else if (setting == "conjectured") {
        const bmojn::ConjecturedNd c = bmojn::conjectured_nd(eps, dim);
        delta = sign == Sign::plus ? c.delta_plus_nd : c.delta_minus_nd;
        if (std::isnan(delta))
            throw std::domain_error("eval: conjectured delta undefined at this eps");
        conjectural = true;
    } else if (setting != "continuous") {
        throw std::invalid_argument("setting must be continuous, dyadic or conjectured");
    }
    const ExtendedValue v = bmojn::bellman_value(p, delta, sign);

    if (format == "json") {
        json j{{"setting", setting}, {"sign", bmojn::to_string(sign)},
               {"eps", eps},         {"x1", x1},
               {"x2", x2},           {"delta", delta},
               {"units", "dimensionless"}, {"conjectural", conjectural},
               {"formula", "(1-/+g)/(1-/+delta)*exp(x1+/-g-/+delta), g=sqrt(delta^2+x1^2-x2)"},
               {"infinite", !v.finite}};
        j["value"] = v.finite ? json(v.value) : json(nullptr);
        emit(j.dump(2) + "\n", out_path);
    } else {
        std::string text = "B_" + std::string(sign == Sign::plus ? "plus" : "minus") +
                           "(x1 = " + fmt15(x1) + ", x2 = " + fmt15(x2) +
                           "; delta = " + fmt15(delta) + ") = ";
        text += v.finite ? fmt15(v.value) : "infinite";
        if (conjectural) text += "   [CONJECTURAL]";
        emit(text + "\n", out_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// extremal
// ---------------------------------------------------------------------------

int run_extremal(const std::string& setting, const std::string& sign_s, double eps,
                 double x1, double x2, int depth, int samples, const std::string& format,
                 const std::string& out_path) {
    const Sign sign = parse_sign(sign_s);
    const BellmanPoint p(x1, x2);
    if (samples < 2) throw std::invalid_argument("extremal: need at least 2 samples");

    json desc;
    std::vector<std::pair<double, double>> table(samples);
    if (setting == "continuous") {
        const bmojn::PiecewiseFunction phi = bmojn::continuous_extremal(p, eps, sign);
        for (int i = 0; i < samples; ++i) {
            const double t = static_cast<double>(i + 1) / samples;
            table[i] = {t, phi(t)};
        }
        desc = bmojn::to_json(phi);
    } else if (setting == "dyadic") {
        const bmojn::DyadicStepFunction phi = bmojn::dyadic_extremal(p, eps, sign, depth);
        for (int i = 0; i < samples; ++i) {
            const double t = static_cast<double>(i + 1) / samples;
            table[i] = {t, phi(t)};
        }
        desc = bmojn::to_json(phi);
    } else {
        throw std::invalid_argument("setting must be continuous or dyadic");
    }

    if (format == "json") {
        emit(desc.dump(2) + "\n", out_path);
    } else {
        std::string text = "t,phi\n";
        for (const auto& [t, v] : table) text += fmt15(t) + "," + fmt15(v) + "\n";
        emit(text, out_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int run_sweep(double eps_from, double eps_to, int steps, int dim,
              const std::string& format, const std::string& out_path) {
    if (steps < 1) throw std::invalid_argument("sweep: steps must be positive");
    if (!(eps_from >= 0.0 && eps_from <= eps_to))
        throw std::invalid_argument("sweep: need 0 <= eps-from <= eps-to");

    struct Row {
        double eps;
        ExtendedValue c_cont, c_dyad;
        double delta_plus = std::nan(""), delta_minus = std::nan("");
        ExtendedValue c_conj;
        bool has_conj = false;
    };
    std::vector<Row> rows(steps + 1);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i <= steps; ++i) {
        Row r;
        r.eps = steps == 0 ? eps_from
                           : eps_from + (eps_to - eps_from) * static_cast<double>(i) / steps;
        r.c_cont = bmojn::c_continuous(r.eps);
        r.c_dyad = bmojn::c_dyadic(r.eps);
        if (r.eps > 0.0) {
            if (r.eps < bmojn::eps0_dyadic())
                r.delta_plus = bmojn::delta_root(r.eps, Sign::plus).root;
            r.delta_minus = bmojn::delta_root(r.eps, Sign::minus).root;
        }
        if (dim >= 1) {
            r.c_conj = bmojn::conjectured_nd(r.eps, dim).c_nd;
            r.has_conj = true;
        }
        rows[i] = r;
    }

    auto cell = [](const ExtendedValue& v) { return v.finite ? fmt15(v.value) : ""; };
    auto dcell = [](double v) { return std::isnan(v) ? std::string() : fmt15(v); };

    if (format == "json") {
        json arr = json::array();
        for (const Row& r : rows) {
            json j{{"eps", r.eps}};
            j["C_cont"] = r.c_cont.finite ? json(r.c_cont.value) : json(nullptr);
            j["C_dyad"] = r.c_dyad.finite ? json(r.c_dyad.value) : json(nullptr);
            j["delta_plus"] = std::isnan(r.delta_plus) ? json(nullptr) : json(r.delta_plus);
            j["delta_minus"] =
                std::isnan(r.delta_minus) ? json(nullptr) : json(r.delta_minus);
            j["conjectural_n"] = r.has_conj ? json(dim) : json(nullptr);
            j["C_conj"] =
                (r.has_conj && r.c_conj.finite) ? json(r.c_conj.value) : json(nullptr);
            j["conjectural"] = r.has_conj;
            arr.push_back(std::move(j));
        }
        emit(arr.dump(2) + "\n", out_path);
    } else {
        std::string text = "eps,C_cont,C_dyad,delta_plus,delta_minus,conjectural_n,C_conj\n";
        for (const Row& r : rows) {
            text += fmt15(r.eps) + "," + cell(r.c_cont) + "," + cell(r.c_dyad) + ",";
            text += dcell(r.delta_plus) + "," + dcell(r.delta_minus) + ",";
            text += (r.has_conj ? std::to_string(dim) : "") + ",";
            text += r.has_conj ? cell(r.c_conj) : "";
            text += "\n";
        }
        emit(text, out_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct Check {
    std::string name;
    bool pass;
    std::string detail;
};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
    return a;
}

void suite_roots(std::vector<Check>& out, double) {
    bool ok = true;
    double worst = 0.0;
    for (int i = 1; i <= 10 && ok; ++i) {
        const double e = 0.09 * i;
        for (Sign s : {Sign::plus, Sign::minus}) {
            if (s == Sign::plus && e >= bmojn::eps0_dyadic()) continue;
            const bmojn::RootResult r = bmojn::delta_root(e, s);
            worst = std::max(worst, std::abs(r.residual));
            ok = ok && r.root > e && r.root <= 3.0 * e / (2.0 * std::sqrt(2.0)) + 1e-12;
        }
    }
    out.push_back({"roots", ok && worst <= 1e-12,
                   "max |g(delta_root)| = " + fmt15(worst)});
}

void suite_bridge(std::vector<Check>& out, double) {
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double e = 0.09 * i;
        const double d = bmojn::delta_root(e, Sign::plus).root;
        const double lhs = bmojn::bellman_value(BellmanPoint(0.0, e * e), d, Sign::plus).get();
        const double rhs = bmojn::c_dyadic(e).get();
        worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    out.push_back({"bridge", worst <= 1e-10, "max rel diff = " + fmt15(worst)});
}

void suite_concavity(std::vector<Check>& out, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 11));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_qf = 0.0, worst_det = 0.0, worst_fd = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double delta = 0.2 + 0.75 * unit(rng);
        const Sign s = unit(rng) < 0.5 ? Sign::plus : Sign::minus;
        const double x1 = 4.0 * unit(rng) - 2.0;
        const double u = (0.02 + 0.9 * unit(rng)) * delta * delta;
        const BellmanPoint p(x1, x1 * x1 + u);
        const std::array<double, 2> d{2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0};
        min_qf = std::min(min_qf, bmojn::quadratic_form(p, d, delta, s));
        const bmojn::BellmanDerivatives bd = bmojn::bellman_derivatives(p, delta, s);
        const double det = bd.h11 * bd.h22 - bd.h12 * bd.h12;
        worst_det = std::max(worst_det, std::abs(det) / (std::abs(bd.h11 * bd.h22) +
                                                         bd.h12 * bd.h12 + 1e-300));
        if (i < 20) {
            // conditioning: keep the gap well above the FD step
            const double dq = 0.45 + 0.45 * unit(rng);
            const double xq = 3.0 * unit(rng) - 1.5;
            const BellmanPoint q(xq, xq * xq + (0.05 + 0.55 * unit(rng)) * dq * dq);
            worst_fd = std::max(worst_fd, bmojn::hessian_fd_check(q, dq, s, 1e-4));
        }
    }
    out.push_back({"concavity", min_qf >= -1e-12 && worst_det <= 1e-8 && worst_fd < 1e-5,
                   "min qf = " + fmt15(min_qf) + ", det rel = " + fmt15(worst_det) +
                       ", fd rel = " + fmt15(worst_fd)});
}

void suite_ode(std::vector<Check>& out, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 13));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        const Sign s = i % 2 == 0 ? Sign::plus : Sign::minus;
        // the residual is pure discretization error, singular at t = delta^2
        // and, for plus, at (delta -> 1, t -> 0); sample away from both
        const double delta =
            s == Sign::plus ? 0.3 + 0.5 * unit(rng) : 0.3 + 0.65 * unit(rng);
        const double t = (0.05 + 0.8 * unit(rng)) * delta * delta;
        try {
            worst = std::max(worst, std::abs(bmojn::ode_residual(t, delta, s, 1e-4)));
        } catch (const std::exception&) {
            ok = false;
        }
    }
    out.push_back({"ode", ok && worst < 1e-6, "max |residual| = " + fmt15(worst)});
}

void suite_midpoint(std::vector<Check>& out, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 17));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double dp = bmojn::delta_root(eps, Sign::plus).root;
    const double dm = bmojn::delta_root(eps, Sign::minus).root;
    double worst_plus = 0.0, worst_minus = 0.0;
    int used = 0;
    while (used < 2000) {
        const double a1 = 2.0 * unit(rng) - 1.0, b1 = 2.0 * unit(rng) - 1.0;
        const BellmanPoint xm(a1, a1 * a1 + unit(rng) * eps * eps);
        const BellmanPoint xp(b1, b1 * b1 + unit(rng) * eps * eps);
        const double m1 = 0.5 * (xm.x1 + xp.x1), m2 = 0.5 * (xm.x2 + xp.x2);
        if (m2 - m1 * m1 > eps * eps) continue;
        ++used;
        const BellmanPoint mid(m1, m2);
        const double gp = 2.0 * bmojn::bellman_value(mid, dp, Sign::plus).get() -
                          bmojn::bellman_value(xm, dp, Sign::plus).get() -
                          bmojn::bellman_value(xp, dp, Sign::plus).get();
        const double gm = 2.0 * bmojn::bellman_value(mid, dm, Sign::minus).get() -
                          bmojn::bellman_value(xm, dm, Sign::minus).get() -
                          bmojn::bellman_value(xp, dm, Sign::minus).get();
        worst_plus = std::min(worst_plus, gp);
        worst_minus = std::max(worst_minus, gm);
    }
    out.push_back({"midpoint", worst_plus >= -1e-10 && worst_minus <= 1e-10,
                   "plus min gap = " + fmt15(worst_plus) +
                       ", minus max gap = " + fmt15(worst_minus)});
}

void suite_scan(std::vector<Check>& out, double eps, int grid) {
    bool ok = true;
    std::string detail;
    for (Sign s : {Sign::plus, Sign::minus}) {
        const double d0 = bmojn::delta_root(eps, s).root;
        const bmojn::ScanReport at_root = bmojn::scan_constraint_set(d0, eps, s, grid);
        const bmojn::ScanReport inside = bmojn::scan_constraint_set(d0 - 0.01, eps, s, grid);
        const double sg = bmojn::signum(s);
        ok = ok && std::abs(at_root.extremum) <= 1e-6 && sg * inside.extremum < 0.0;
        detail += std::string(bmojn::to_string(s)) + ": m(root) = " + fmt15(at_root.extremum) +
                  ", m(root-0.01) = " + fmt15(inside.extremum) + "  ";
    }
    out.push_back({"scan", ok, detail});
}

void suite_induction(std::vector<Check>& out, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 19));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        std::vector<double> leaves(16);
        for (double& v : leaves) v = 2.0 * unit(rng) - 1.0;
        bmojn::DyadicStepFunction phi = bmojn::DyadicStepFunction::from_leaves(leaves);
        const double norm = bmojn::bmo_norm_dyadic(phi, 4);
        if (norm < 1e-9) continue;
        std::vector<double> scaled(16);
        for (int i = 0; i < 16; ++i) scaled[i] = leaves[i] * (eps / norm) * 0.999;
        phi = bmojn::DyadicStepFunction::from_leaves(scaled);
        try {
            bmojn::bellman_induction(phi, eps, trial % 2 == 0 ? Sign::plus : Sign::minus, 4);
        } catch (const std::exception&) {
            ok = false;
        }
    }
    // flat chain on the constructed extremizer
    double flat = 0.0;
    const BellmanPoint p(0.1, 0.1 * 0.1 + 0.4 * eps * eps);
    const bmojn::DyadicStepFunction ext = bmojn::dyadic_extremal(p, eps, Sign::plus, 30);
    const bmojn::InductionChain chain = bmojn::bellman_induction(ext, eps, Sign::plus, 8);
    for (std::size_t i = 1; i < chain.levels.size(); ++i)
        flat = std::max(flat,
                        std::abs(chain.levels[i].value - chain.levels[i - 1].value));
    out.push_back({"induction", ok && flat < 1e-8,
                   "max level step on extremizer = " + fmt15(flat)});
}

void suite_oracle(std::vector<Check>& out, double eps, long budget, std::uint64_t seed) {
    bool ok = true;
    std::string detail;
    const double d = bmojn::delta_root(eps, Sign::plus).root;
    for (int depth = 1; depth <= 3 && ok; ++depth) {
        const BellmanPoint p(0.0, eps * eps);
        const double found = bmojn::brute_force_oracle(p, eps, depth, budget, seed);
        const double bound = bmojn::bellman_value(p, d, Sign::plus).get();
        ok = found <= bound + 1e-9;
        if (depth == 1) ok = ok && std::abs(found - std::cosh(eps)) <= 1e-9;
        detail += "d" + std::to_string(depth) + ": " + fmt15(found) + " <= " +
                  fmt15(bound) + "  ";
    }
    out.push_back({"oracle", ok, detail});
}

void suite_splitting(std::vector<Check>& out, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 23));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    int tangent = 0;
    for (int i = 0; i < 100 && ok; ++i) {
        const double a = 0.05 + 0.95 * unit(rng);
        const double b = 2.0 * unit(rng) - 1.0;
        const double gamma = (unit(rng) < 0.5 ? 1.0 : -1.0) * eps;
        const double ratio = (i % 3 == 0) ? 1.1 : (i % 3 == 1 ? 1.5 : 2.0);
        const bmojn::PiecewiseFunction phi = bmojn::PiecewiseFunction::log_ramp(a, b, gamma);
        const bmojn::SplitResult sr = bmojn::split_interval(phi, eps, ratio * eps);
        const double e1 = ratio * eps;
        ok = sr.rho_value <= e1 * e1 + 1e-9 &&
             bmojn::segment_gap_max(sr.x_minus, sr.x_plus) <= e1 * e1 + 1e-9;
        if (sr.tangent_stop) ++tangent;
    }
    out.push_back({"splitting", ok,
                   "tangent stops: " + std::to_string(tangent) + "/100"});
}

void suite_extremal(std::vector<Check>& out, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 29));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_c = 0.0, worst_d = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x1 = 2.0 * unit(rng) - 1.0;
        const double u = (0.05 + 0.9 * unit(rng)) * eps * eps;
        const BellmanPoint p(x1, x1 * x1 + u);
        const Sign s = i % 2 == 0 ? Sign::plus : Sign::minus;
        const bmojn::PiecewiseFunction pc = bmojn::continuous_extremal(p, eps, s);
        const bmojn::MomentTriple mc = bmojn::moments(pc, 0.0, 1.0);
        const double bc = bmojn::bellman_value(p, eps, s).get();
        worst_c = std::max(worst_c, std::abs(mc.exp_mean.get() - bc) / bc);

        const double d = bmojn::delta_root(eps, s).root;
        const bmojn::DyadicStepFunction pd = bmojn::dyadic_extremal(p, eps, s, 40);
        const bmojn::MomentTriple md = bmojn::moments(pd, 0.0, 1.0);
        const double bd = bmojn::bellman_value(p, d, s).get();
        worst_d = std::max(worst_d, std::abs(md.exp_mean.get() - bd) / bd);
    }
    out.push_back({"extremal", worst_c <= 1e-10 && worst_d <= 1e-8,
                   "cont rel = " + fmt15(worst_c) + ", dyad rel = " + fmt15(worst_d)});
}

void suite_digits(std::vector<Check>& out, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(mix(seed, 31));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double d = bmojn::delta_root(eps, Sign::plus).root;
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        const double x1 = 2.0 * unit(rng) - 1.0;
        const double u = (0.01 + 0.98 * unit(rng)) * eps * eps;
        const BellmanPoint p(x1, x1 * x1 + u);
        const double alpha = bmojn::ExtremalParams::from_point(p, eps, d).alpha;
        ok = bmojn::perspective2_digits(p, eps, d, 30) == bmojn::dyadic_digits(alpha, 30);
    }
    out.push_back({"digits", ok, "perspective-2 stream matches the binary expansion"});
}

int run_verify(const std::string& suite, double eps, std::uint64_t seed, int grid,
               long budget) {
    std::vector<Check> checks;
    auto want = [&](const char* name) { return suite == "all" || suite == name; };
    if (want("roots")) suite_roots(checks, eps);
    if (want("bridge")) suite_bridge(checks, eps);
    if (want("concavity")) suite_concavity(checks, seed);
    if (want("ode")) suite_ode(checks, seed);
    if (want("midpoint")) suite_midpoint(checks, eps, seed);
    if (want("scan")) suite_scan(checks, eps, grid);
    if (want("induction")) suite_induction(checks, eps, seed);
    if (want("oracle")) suite_oracle(checks, eps, budget, seed);
    if (want("splitting")) suite_splitting(checks, eps, seed);
    if (want("extremal")) suite_extremal(checks, eps, seed);
    if (want("digits")) suite_digits(checks, eps, seed);
    if (checks.empty()) throw std::invalid_argument("unknown suite: " + suite);

    bool all = true;
    for (const Check& c : checks) {
        std::printf("%-4s %-10s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%zu/%zu checks passed\n",
                static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(),
                                                       [](const Check& c) { return c.pass; })),
                checks.size());
    return all ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp constants, Bellman functions and extremizers for the "
                 "integral-form John-Nirenberg inequality (L2-based BMO)"};
    app.require_subcommand(1);

    std::string setting = "continuous", sign = "plus", format = "plain", out_path;
    std::string suite = "all";
    double eps = 0.5, x1 = 0.0, x2 = 0.25, eps_from = 0.05, eps_to = 0.95;
    int dim = 1, depth = 40, grid = 48, steps = 18, samples = 512;
    long budget = 20000;
    std::uint64_t seed = 1;

    CLI::App* c_const = app.add_subcommand("constants", "sharp constants C, C_d, C_d_n");
    c_const->add_option("--setting", setting, "continuous|dyadic|conjectured")->required();
    c_const->add_option("--eps", eps, "BMO norm radius")->required();
    c_const->add_option("--dim", dim, "dimension n for the conjectured setting");
    c_const->add_option("--format", format, "plain|csv|json");
    c_const->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate the Bellman function at a point");
    c_eval->add_option("--setting", setting, "continuous|dyadic|conjectured")->required();
    c_eval->add_option("--sign", sign, "plus|minus")->required();
    c_eval->add_option("--eps", eps)->required();
    c_eval->add_option("--x1", x1)->required();
    c_eval->add_option("--x2", x2)->required();
    c_eval->add_option("--dim", dim);
    c_eval->add_option("--format", format, "plain|json");
    c_eval->add_option("--out", out_path);

    CLI::App* c_ext = app.add_subcommand("extremal", "construct and export an extremizer");
    c_ext->add_option("--setting", setting, "continuous|dyadic")->required();
    c_ext->add_option("--sign", sign, "plus|minus")->required();
    c_ext->add_option("--eps", eps)->required();
    c_ext->add_option("--x1", x1)->required();
    c_ext->add_option("--x2", x2)->required();
    c_ext->add_option("--depth", depth, "digit depth for the dyadic extremizer");
    c_ext->add_option("--samples", samples, "rows in the CSV sample table");
    c_ext->add_option("--format", format, "csv|json");
    c_ext->add_option("--out", out_path);

    CLI::App* c_ver = app.add_subcommand("verify", "run verification suites");
    c_ver->add_option("--suite", suite,
                      "all|roots|bridge|concavity|ode|midpoint|scan|induction|oracle|"
                      "splitting|extremal|digits");
    c_ver->add_option("--eps", eps);
    c_ver->add_option("--seed", seed);
    c_ver->add_option("--grid", grid);
    c_ver->add_option("--budget", budget);

    CLI::App* c_sweep = app.add_subcommand("sweep", "tabulate constants over an eps grid");
    c_sweep->add_option("--eps-from", eps_from);
    c_sweep->add_option("--eps-to", eps_to);
    c_sweep->add_option("--steps", steps, "number of grid intervals");
    c_sweep->add_option("--dim", dim, "include the conjectured column for this n (0 = off)");
    c_sweep->add_option("--format", format, "csv|json");
    c_sweep->add_option("--out", out_path);
    dim = 0; // sweep default: no conjectured column unless asked

    try {
        app.parse(argc, argv);
        if (c_const->parsed()) return run_constants(setting, eps, std::max(dim, 1), format, out_path);
        if (c_eval->parsed()) return run_eval(setting, sign, eps, x1, x2, std::max(dim, 1), format, out_path);
        if (c_ext->parsed())
            return run_extremal(setting, sign, eps, x1, x2, depth, samples, format, out_path);
        if (c_ver->parsed()) return run_verify(suite, eps, seed, grid, budget);
        if (c_sweep->parsed()) return run_sweep(eps_from, eps_to, steps, dim, format, out_path);
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
