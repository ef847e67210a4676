#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "axired/equivariant.hpp"
#include "axired/metric.hpp"
#include "axired/parse.hpp"
#include "axired/print.hpp"

namespace axired {

struct ParameterRangeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CatalogEntry {
    std::string name;
    MetricSpec metric;
    bool vacuum = false;
    std::vector<std::string> killing_coords;
    bool hypersurface_orthogonal = false;  // expectation for the phi-reduction
};

namespace detail {

inline Chart spacetime_chart(double scale) {
    Chart c;
    c.coords = {"t", "r", "theta", "phi"};
    c.box = {{0.0, 1.0, 0.0},
             {3.0 * scale, 10.0 * scale, 0.0},
             {0.0, M_PI, 0.3},
             {0.0, 2 * M_PI, 0.0}};
    return c;
}

} // namespace detail

inline CatalogEntry minkowski() {
    Chart c = detail::spacetime_chart(1.0);
    MetricSpec g(c, Signature::Lorentzian, 0);
    auto r = sym("r"), th = sym("theta");
    g.set(0, 0, num(-1));
    g.set(1, 1, num(1));
    g.set(2, 2, pow(r, 2));
    g.set(3, 3, pow(r, 2) * pow(sin_(th), 2));
    return {"minkowski", std::move(g), true, {"t", "phi"}, true};
}

inline CatalogEntry schwarzschild(double m) {
    if (!(m > 0)) throw ParameterRangeError("schwarzschild: m must be positive");
    Chart c = detail::spacetime_chart(m);
    c.params["m"] = m;
    MetricSpec g(c, Signature::Lorentzian, 0);
    auto r = sym("r"), th = sym("theta");
    ExprPtr f = parse("1 - 2*m/r");
    g.set(0, 0, make_neg(f));
    g.set(1, 1, pow(f, -1));
    g.set(2, 2, pow(r, 2));
    g.set(3, 3, pow(r, 2) * pow(sin_(th), 2));
    return {"schwarzschild", std::move(g), true, {"t", "phi"}, true};
}

/// Boyer-Lindquist components. The matrix stores g_{t phi} = -2 M r a sin^2
/// theta / A, half the line element's dt dphi coefficient.
inline CatalogEntry kerr(double M, double a) {
    if (!(M > 0)) throw ParameterRangeError("kerr: M must be positive");
    if (!(a >= 0 && a < M)) throw ParameterRangeError("kerr: need 0 <= a < M (subextremal)");
    Chart c = detail::spacetime_chart(M);
    c.params["M"] = M;
    c.params["a"] = a;
    MetricSpec g(c, Signature::Lorentzian, 0);
    auto r = sym("r"), th = sym("theta"), Ms = sym("M"), as = sym("a");
    ExprPtr A = pow(r, 2) + pow(as, 2) * pow(cos_(th), 2);
    ExprPtr C = pow(r, 2) - num(2) * Ms * r + pow(as, 2);
    ExprPtr B = pow(pow(r, 2) + pow(as, 2), 2) - C * pow(as, 2) * pow(sin_(th), 2);
    g.set(0, 0, make_neg(num(1) - num(2) * Ms * r / A));
    g.set(0, 3, make_neg(num(2) * Ms * r * as * pow(sin_(th), 2) / A));
    g.set(3, 3, B * pow(sin_(th), 2) / A);
    g.set(1, 1, A / C);
    g.set(2, 2, A);
    return {"kerr", std::move(g), true, {"t", "phi"}, false};
}

/// Schwarzschild spatial slice in asymptotically Cartesian components,
/// q_ij = delta_ij + (f^{-1} - 1) x_i x_j / r^2 on r > 2m.
inline MetricSpec schwarzschild_spatial_cartesian(double m) {
    if (m < 0) throw ParameterRangeError("schwarzschild_spatial_cartesian: m must be nonnegative");
    Chart c;
    c.coords = {"x", "y", "z"};
    double lo = 2 * m + 1, hi = 5 * m + 5;
    c.box = {{lo, hi, 0.0}, {lo, hi, 0.0}, {lo, hi, 0.0}};
    c.params["m"] = m;
    MetricSpec q(c, Signature::Riemannian);
    ExprPtr r2 = parse("x^2 + y^2 + z^2");
    ExprPtr f = num(1) - num(2) * sym("m") * pow(r2, Rational(-1, 2));
    ExprPtr w = (pow(f, -1) - num(1)) / r2;
    const char* xs[] = {"x", "y", "z"};
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = i; j < 3; ++j) {
            ExprPtr e = w * sym(xs[i]) * sym(xs[j]);
            if (i == j) e = num(1) + e;
            q.set(i, j, simplify(e));
        }
    return q;
}

enum class ProfileKind { GaussianBump, CompactBump };
enum class TargetKind { Sphere, Hyperbolic };

/// Replace bound symbols by exact rational representations of their values;
/// used to freeze numeric parameters into a profile expression.
inline ExprPtr substitute_constants(const ExprPtr& e, const Binding& b);

/// Smooth radial data with u(0) = 0 and decay beyond r_max.
inline EquivariantData equivariant_profile(ProfileKind kind, double amplitude, double width,
                                           TargetKind target) {
    if (amplitude < 0 || !(width > 0)) throw ParameterRangeError("equivariant_profile: need amplitude >= 0, width > 0");
    EquivariantData d;
    Binding consts{{"amp", amplitude}, {"w", width}};
    auto r = sym("r");
    ExprPtr x2 = pow(r / sym("w"), 2);
    if (amplitude == 0) {
        d.u_expr = zero_expr();
        d.r_max = width;
    } else if (kind == ProfileKind::GaussianBump) {
        d.u_expr = sym("amp") * x2 * exp_(make_neg(x2));
        d.r_max = 12 * width;
    } else {
        d.u_expr = sym("amp") * x2 * exp_(num(1) - pow(num(1) - x2, -1));
        d.r_max = width;
    }
    // bake the parameters in so the profile is a function of r alone
    d.u_expr = substitute_constants(d.u_expr, consts);
    d.p_expr = zero_expr();
    d.f_expr = target == TargetKind::Sphere ? sin_(sym("u")) : make_call(Func::Sinh, sym("u"));
    return d;
}

namespace detail {

inline ExprPtr subst_rec(const ExprPtr& e, const Binding& b,
                         std::unordered_map<const Expr*, ExprPtr>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprPtr r;
    switch (e->kind) {
        case Kind::Number: r = e; break;
        case Kind::Symbol: {
            auto s = b.find(e->name);
            if (s == b.end()) { r = e; break; }
            // exact binary representation of the double
            double v = s->second;
            Rational q;
            int expn;
            double frac = std::frexp(v, &expn);
            long long mant = static_cast<long long>(std::ldexp(frac, 53));
            expn -= 53;
            q = Rational(mant);
            if (expn >= 0)
                q *= rational_pow(Rational(2), expn);
            else
                q /= rational_pow(Rational(2), -expn);
            r = make_number(q);
            break;
        }
        case Kind::Call: r = make_call(e->fn, subst_rec(e->kids[0], b, memo)); break;
        case Kind::Power: r = make_power(subst_rec(e->kids[0], b, memo), e->value); break;
        case Kind::Sum: {
            std::vector<ExprPtr> kids;
            for (const auto& k : e->kids) kids.push_back(subst_rec(k, b, memo));
            r = make_sum(std::move(kids));
            break;
        }
        case Kind::Product: {
            std::vector<ExprPtr> kids;
            for (const auto& k : e->kids) kids.push_back(subst_rec(k, b, memo));
            r = make_product(std::move(kids));
            break;
        }
    }
    memo[e.get()] = r;
    return r;
}

} // namespace detail

inline ExprPtr substitute_constants(const ExprPtr& e, const Binding& b) {
    std::unordered_map<const Expr*, ExprPtr> memo;
    return detail::subst_rec(e, b, memo);
}

// ---- metric text format ----------------------------------------------------
//
//   # comment
//   dim 4 coords t r theta phi signature lorentzian time=0
//   param M=1
//   box r 3 10
//   0 0 := -(1 - 2*M/r)
//
// Lower-triangle components only; omitted components are zero.

inline std::string save_metric(const MetricSpec& m) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "dim " << m.dim() << " coords";
    for (const auto& c : m.chart().coords) os << ' ' << c;
    os << " signature"
       << (m.signature() == Signature::Lorentzian ? " lorentzian time=" + std::to_string(m.time_index())
                                                  : std::string(" riemannian"));
    os << '\n';
    for (const auto& [k, v] : m.chart().params) os << "param " << k << '=' << v << '\n';
    for (size_t i = 0; i < m.dim(); ++i) {
        const auto& b = m.chart().box[i];
        os << "box " << m.chart().coords[i] << ' ' << b.inner_lo() << ' ' << b.inner_hi() << '\n';
    }
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t j = 0; j <= i; ++j)
            if (!is_zero_literal(m.at(i, j)))
                os << i << ' ' << j << " := " << to_string(m.at(i, j)) << '\n';
    return os.str();
}

struct MetricFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline MetricSpec load_metric(std::istream& in) {
    std::string line;
    Chart chart;
    Signature sig = Signature::Riemannian;
    int time_index = -1;
    size_t dim = 0;
    bool header_seen = false;
    std::vector<std::tuple<size_t, size_t, ExprPtr>> comps;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "dim") {
            ls >> dim;
            std::string kw;
            ls >> kw;
            if (kw != "coords") throw MetricFormatError("line " + std::to_string(lineno) + ": expected 'coords'");
            for (size_t i = 0; i < dim; ++i) {
                std::string c;
                if (!(ls >> c)) throw MetricFormatError("line " + std::to_string(lineno) + ": missing coordinate name");
                chart.coords.push_back(c);
                chart.box.push_back({0.0, 1.0, 0.0});
            }
            ls >> kw;
            if (kw != "signature") throw MetricFormatError("line " + std::to_string(lineno) + ": expected 'signature'");
            std::string s;
            ls >> s;
            if (s == "riemannian") {
                sig = Signature::Riemannian;
            } else if (s.rfind("lorentzian", 0) == 0) {
                sig = Signature::Lorentzian;
                std::string t;
                if (!(ls >> t) || t.rfind("time=", 0) != 0)
                    throw MetricFormatError("line " + std::to_string(lineno) + ": lorentzian needs time=<index>");
                time_index = std::stoi(t.substr(5));
            } else {
                throw MetricFormatError("line " + std::to_string(lineno) + ": unknown signature '" + s + "'");
            }
            header_seen = true;
        } else if (tok == "param") {
            std::string rest;
            ls >> rest;
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw MetricFormatError("line " + std::to_string(lineno) + ": param needs name=value");
            chart.params[rest.substr(0, eq)] = std::stod(rest.substr(eq + 1));
        } else if (tok == "box") {
            std::string c;
            double lo, hi;
            if (!(ls >> c >> lo >> hi)) throw MetricFormatError("line " + std::to_string(lineno) + ": box needs coord lo hi");
            bool found = false;
            for (size_t i = 0; i < chart.coords.size(); ++i)
                if (chart.coords[i] == c) {
                    chart.box[i] = {lo, hi, 0.0};
                    found = true;
                }
            if (!found) throw MetricFormatError("line " + std::to_string(lineno) + ": unknown coordinate '" + c + "'");
        } else {
            // component line: i j := expr
            size_t i = 0, j = 0;
            std::istringstream cs(line);
            std::string assign;
            if (!(cs >> i >> j >> assign) || assign != ":=")
                throw MetricFormatError("line " + std::to_string(lineno) + ": expected 'i j := expr'");
            std::string expr_src;
            std::getline(cs, expr_src);
            comps.emplace_back(i, j, parse(expr_src));
        }
    }
    if (!header_seen) throw MetricFormatError("missing 'dim ... coords ... signature ...' header");
    MetricSpec m(chart, sig, time_index);
    for (auto& [i, j, e] : comps) {
        if (i >= dim || j >= dim) throw MetricFormatError("component index out of range");
        m.set(i, j, std::move(e));
    }
    return m;
}

inline MetricSpec load_metric_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MetricFormatError("cannot open metric file: " + path);
    return load_metric(in);
}

} // namespace axired
