#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "axired/geometry.hpp"
#include "axired/quadrature.hpp"

namespace axired {

struct NotAxisymmetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateKillingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DoubleConformalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Result of splitting a 4-metric along the rotational Killing vector:
/// g4 = g3 + e^{2u} (dphi + A)^2.
struct ReducedData {
    MetricSpec g3;    // 2+1 metric on coordinates (t, r, theta)
    ExprPtr u;        // Killing norm exponent, |d_phi|^2 = e^{2u}
    ExprPtr e2u;      // e^{2u} kept in closed form (the original g_{phi phi})
    TensorField A;    // one-form A_mu on the reduced chart
    bool conformal = false;  // true once g3 has been rescaled by e^{2u}
};

inline ReducedData split_killing(const MetricSpec& m4) {
    size_t n = m4.dim();
    size_t phi = n;
    for (size_t i = 0; i < n; ++i)
        if (m4.chart().coords[i] == "phi") phi = i;
    if (phi == n) throw NotAxisymmetricError("no coordinate named 'phi'");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            if (!is_zero_literal(differentiate(m4.at(i, j), "phi")))
                throw NotAxisymmetricError("metric depends on phi; d_phi is not Killing");
    const ExprPtr& gpp = m4.at(phi, phi);
    if (is_zero_literal(simplify(gpp)))
        throw DegenerateKillingError("g_{phi phi} vanishes identically (axis locus)");

    Chart c3;
    std::vector<size_t> keep;
    for (size_t i = 0; i < n; ++i)
        if (i != phi) {
            keep.push_back(i);
            c3.coords.push_back(m4.chart().coords[i]);
            c3.box.push_back(m4.chart().box[i]);
        }
    c3.params = m4.chart().params;

    ReducedData rd{MetricSpec(c3, Signature::Lorentzian, m4.time_index()), nullptr, nullptr,
                   TensorField("_a", 3, c3), false};
    rd.e2u = simplify(gpp);
    rd.u = log_(sqrt_chart_positive(rd.e2u));
    ExprPtr inv_gpp = make_power(gpp, -1);
    for (size_t a = 0; a < 3; ++a)
        rd.A.set({a}, simplify(m4.at(keep[a], phi) * inv_gpp));
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = a; b < 3; ++b)
            rd.g3.set(a, b,
                      simplify(m4.at(keep[a], keep[b]) -
                               m4.at(keep[a], phi) * m4.at(keep[b], phi) * inv_gpp));
    return rd;
}

/// Componentwise residual of g4 - (g3 + e^{2u} (dphi + A)^2) at sample points.
inline double reconstruction_residual(const MetricSpec& m4, const ReducedData& rd,
                                      size_t points = 20, unsigned seed = 42) {
    if (rd.conformal) throw DoubleConformalError("reconstruction needs the non-conformal split");
    size_t n = m4.dim();
    size_t phi = 0;
    for (size_t i = 0; i < n; ++i)
        if (m4.chart().coords[i] == "phi") phi = i;
    std::vector<size_t> keep;
    for (size_t i = 0; i < n; ++i)
        if (i != phi) keep.push_back(i);
    double worst = 0;
    for (const auto& b : m4.chart().sample(points, seed)) {
        Evaluator ev(b);
        double e2u = ev(rd.e2u);
        std::array<double, 3> A{};
        for (size_t a = 0; a < 3; ++a) A[a] = ev(rd.A.at({a}));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i; j < n; ++j) {
                double rec;
                if (i == phi && j == phi) {
                    rec = e2u;
                } else if (j == phi) {
                    size_t ia = 0;
                    while (keep[ia] != i) ++ia;
                    rec = e2u * A[ia];
                } else if (i == phi) {
                    size_t ja = 0;
                    while (keep[ja] != j) ++ja;
                    rec = e2u * A[ja];
                } else {
                    size_t ia = 0, ja = 0;
                    while (keep[ia] != i) ++ia;
                    while (keep[ja] != j) ++ja;
                    rec = ev(rd.g3.at(ia, ja)) + e2u * A[ia] * A[ja];
                }
                worst = std::max(worst, std::abs(ev(m4.at(i, j)) - rec));
            }
    }
    return worst;
}

/// Rescale g3 by e^{2u} (with psi = u); errors on a second application.
inline ReducedData conformal_reduce(const ReducedData& rd) {
    if (rd.conformal) throw DoubleConformalError("conformal_reduce applied twice");
    ReducedData out = rd;
    out.g3 = scale_metric(rd.g3, rd.e2u);
    out.conformal = true;
    return out;
}

/// F_{mu nu} = d_mu A_nu - d_nu A_mu (the covariant-derivative terms cancel).
inline TensorField faraday(const ReducedData& rd) {
    const Chart& c = rd.g3.chart();
    TensorField f("_ab", 3, c);
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = a + 1; b < 3; ++b) {
            ExprPtr e = simplify(differentiate(rd.A.at({b}), c.coords[a]) -
                                 differentiate(rd.A.at({a}), c.coords[b]));
            f.set({a, b}, e);
            f.set({b, a}, make_neg(e));
        }
    return f;
}

/// G_mu = (1/2) w eps_{mu nu sigma} F^{nu sigma}, the weighted Hodge dual of
/// F taken in the *non-conformal* reduced metric, with eps_{t r theta} =
/// +sqrt(-det g) and weight w = e^{(weight_exponent) u}. The closure dG = 0
/// encodes the R_{mu 3} vacuum equation and singles out weight_exponent = 3;
/// other exponents serve as negative controls.
inline TensorField twist_one_form(const ReducedData& rd, const TensorField& f,
                                  int weight_exponent = 3) {
    // work in the non-conformal metric regardless of the flag
    MetricSpec g = rd.conformal ? scale_metric(rd.g3, make_power(rd.e2u, -1)) : rd.g3;
    TensorField g_inv = inverse_metric(g);
    ExprPtr vol = sqrt_abs_det(g);
    ExprPtr w = make_power(rd.e2u, Rational(weight_exponent, 2));
    TensorField gout("_a", 3, g.chart());
    // eps permutations of (0,1,2) with signs
    const int perm[6][4] = {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1},
                            {0, 2, 1, -1}, {2, 1, 0, -1}, {1, 0, 2, -1}};
    for (size_t mu = 0; mu < 3; ++mu) {
        std::vector<ExprPtr> terms;
        for (const auto& p : perm) {
            if (static_cast<size_t>(p[0]) != mu) continue;
            size_t nu = p[1], sg = p[2];
            // F^{nu sigma} = g^{nu a} g^{sigma b} F_{ab}
            for (size_t a = 0; a < 3; ++a)
                for (size_t b = 0; b < 3; ++b) {
                    if (is_zero_literal(f.at({a, b}))) continue;
                    ExprPtr t = g_inv.at({nu, a}) * g_inv.at({sg, b}) * f.at({a, b});
                    terms.push_back(p[3] > 0 ? t : make_neg(t));
                }
        }
        ExprPtr e = simplify(make_number(Rational(1, 2)) * w * vol * make_sum(std::move(terms)));
        gout.set({mu}, e);
    }
    return gout;
}

/// max |dG| over sample points (exterior-derivative closure check).
inline double closure_residual(const TensorField& one_form, size_t points = 20,
                               unsigned seed = 42) {
    const Chart& c = one_form.chart();
    double worst = 0;
    std::vector<ExprPtr> dg;
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = a + 1; b < 3; ++b)
            dg.push_back(differentiate(one_form.at({b}), c.coords[a]) -
                         differentiate(one_form.at({a}), c.coords[b]));
    for (const auto& bind : c.sample(points, seed)) {
        Evaluator ev(bind);
        for (const auto& e : dg) worst = std::max(worst, std::abs(ev(e)));
    }
    return worst;
}

/// Line integral of a one-form along a polyline; used to build the twist
/// potential v with v(base) = 0.
inline double line_integral(const TensorField& one_form,
                            const std::vector<Binding>& polyline) {
    if (polyline.size() < 2) throw PathError("polyline needs at least two points");
    const Chart& c = one_form.chart();
    const auto& gl = gauss_legendre_01(32);
    double total = 0;
    for (size_t s = 0; s + 1 < polyline.size(); ++s) {
        const Binding& p0 = polyline[s];
        const Binding& p1 = polyline[s + 1];
        for (const auto& [x, wgt] : gl) {
            Binding b = p0;
            for (const auto& coord : c.coords) {
                double v0 = p0.at(coord), v1 = p1.at(coord);
                b[coord] = v0 + x * (v1 - v0);
                double lo = c.box_of(coord).inner_lo(), hi = c.box_of(coord).inner_hi();
                if (b[coord] < lo - 1e-12 || b[coord] > hi + 1e-12)
                    throw PathError("polyline leaves the chart interior at coordinate " + coord);
            }
            Evaluator ev(b);
            double integrand = 0;
            for (size_t a = 0; a < 3; ++a)
                integrand += ev(one_form.at({a})) * (p1.at(c.coords[a]) - p0.at(c.coords[a]));
            total += wgt * integrand;
        }
    }
    return total;
}

inline double twist_potential(const TensorField& g_one_form, const Binding& base,
                              const Binding& target, const std::vector<Binding>& via = {}) {
    std::vector<Binding> path{base};
    path.insert(path.end(), via.begin(), via.end());
    path.push_back(target);
    return line_integral(g_one_form, path);
}

/// Residuals of the reduced vacuum system built from the non-conformal
/// split (g3, u, A):
///   r1_{mu nu} = R_{mu nu} - d_mu u d_nu u - Hess_{mu nu} u
///                - (1/2) e^{2u} F_{mu a} F_nu{}^a
/// (the last term equals +(1/2) e^{2u} F_{mu s} F^s{}_nu in the code's
/// index placement, since F^s{}_nu = g^{sa} F_{a nu} = -F_nu{}^s)
///   r2_mu      = -(1/2) e^{-u} nabla_s (e^{3u} F^s_mu)
///   r3         = -e^{2u} (box u + |du|^2 - (1/4) e^{2u} F_{mn} F^{mn})
struct ReducedResiduals {
    TensorField r_munu;  // "_ab"
    TensorField r_mu3;   // "_a"
    ExprPtr r_33;
    double max_munu = 0, max_mu3 = 0, max_33 = 0;
};

inline ReducedResiduals reduced_vacuum_residuals(const MetricSpec& m4, size_t points = 20,
                                                 unsigned seed = 42) {
    ReducedData rd = split_killing(m4);
    const MetricSpec& g = rd.g3;
    const Chart& c = g.chart();
    TensorField gam = christoffel(g);
    TensorField g_inv = inverse_metric(g);
    TensorField ric = ricci(g);
    TensorField hess = hessian(g, rd.u, gam);
    TensorField f = faraday(rd);
    std::vector<ExprPtr> du(3);
    for (size_t a = 0; a < 3; ++a) du[a] = differentiate(rd.u, c.coords[a]);

    // F^a_b = g^{ac} F_{cb}
    TensorField f_mixed("^a_b", 3, c);
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = 0; b < 3; ++b) {
            std::vector<ExprPtr> terms;
            for (size_t cc = 0; cc < 3; ++cc) terms.push_back(g_inv.at({a, cc}) * f.at({cc, b}));
            f_mixed.set({a, b}, make_sum(std::move(terms)));
        }

    ReducedResiduals out{TensorField("_ab", 3, c), TensorField("_a", 3, c), nullptr};
    for (size_t mu = 0; mu < 3; ++mu)
        for (size_t nu = mu; nu < 3; ++nu) {
            std::vector<ExprPtr> ff;
            for (size_t s = 0; s < 3; ++s) ff.push_back(f.at({mu, s}) * f_mixed.at({s, nu}));
            ExprPtr e = ric.at({mu, nu}) - du[mu] * du[nu] - hess.at({mu, nu}) +
                        make_number(Rational(1, 2)) * rd.e2u * make_sum(std::move(ff));
            out.r_munu.set({mu, nu}, e);
            out.r_munu.set({nu, mu}, e);
        }

    // r2_mu = -(1/2) e^{-u} nabla_s (e^{3u} F^s_mu)
    ExprPtr e3u = make_power(rd.e2u, Rational(3, 2));
    ExprPtr emu = make_power(rd.e2u, Rational(-1, 2));
    for (size_t mu = 0; mu < 3; ++mu) {
        std::vector<ExprPtr> divt;
        for (size_t s = 0; s < 3; ++s) {
            ExprPtr t = e3u * f_mixed.at({s, mu});
            divt.push_back(differentiate(t, c.coords[s]));
            for (size_t a = 0; a < 3; ++a) {
                divt.push_back(gam.at({s, s, a}) * e3u * f_mixed.at({a, mu}));
                divt.push_back(make_neg(gam.at({a, s, mu}) * e3u * f_mixed.at({s, a})));
            }
        }
        out.r_mu3.set({mu}, make_number(Rational(-1, 2)) * emu * make_sum(std::move(divt)));
    }

    // r3
    std::vector<ExprPtr> box_terms, grad_terms;
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = 0; b < 3; ++b) {
            box_terms.push_back(g_inv.at({a, b}) * hess.at({a, b}));
            grad_terms.push_back(g_inv.at({a, b}) * du[a] * du[b]);
        }
    // F_{mn} F^{mn} = F_{mn} g^{ma} g^{nb} F_{ab}
    std::vector<ExprPtr> fsq;
    for (size_t m = 0; m < 3; ++m)
        for (size_t n2 = 0; n2 < 3; ++n2)
            for (size_t a = 0; a < 3; ++a)
                for (size_t b = 0; b < 3; ++b) {
                    if (is_zero_literal(f.at({m, n2})) || is_zero_literal(f.at({a, b}))) continue;
                    fsq.push_back(f.at({m, n2}) * g_inv.at({m, a}) * g_inv.at({n2, b}) * f.at({a, b}));
                }
    ExprPtr fnorm = make_sum(std::move(fsq));
    out.r_33 = make_neg(rd.e2u * (make_sum(std::move(box_terms)) + make_sum(std::move(grad_terms)) -
                                  make_number(Rational(1, 4)) * rd.e2u * fnorm));

    out.max_munu = out.r_munu.max_abs(points, seed);
    out.max_mu3 = out.r_mu3.max_abs(points, seed);
    for (const auto& b : c.sample(points, seed))
        out.max_33 = std::max(out.max_33, std::abs(evaluate(out.r_33, b)));
    return out;
}

/// Residuals of the 2+1 Einstein-wave-map pair on the conformal metric,
/// with the twist gradient supplied as a one-form (dv = G):
///   res1 = box_{gt} u + (1/2) e^{-4u} gt^{mu nu} v_mu v_nu
///   res2 = (1/sqrt -gt) d_mu ( sqrt -gt gt^{mu nu} v_nu ) - 4 gt^{mu nu} u_mu v_nu
struct EwmResiduals {
    ExprPtr res_u, res_v;
    double max_u = 0, max_v = 0;
};

inline EwmResiduals ewm_residuals(const ReducedData& rd, const TensorField& v_grad,
                                  size_t points = 20, unsigned seed = 42) {
    if (!rd.conformal) throw DoubleConformalError("ewm_residuals needs the conformal metric");
    const MetricSpec& g = rd.g3;
    const Chart& c = g.chart();
    TensorField g_inv = inverse_metric(g);
    ExprPtr vol = sqrt_abs_det(g);
    std::vector<ExprPtr> du(3), dv(3);
    for (size_t a = 0; a < 3; ++a) {
        du[a] = differentiate(rd.u, c.coords[a]);
        dv[a] = v_grad.at({a});
    }
    ExprPtr em4u = make_power(rd.e2u, -2);
    std::vector<ExprPtr> vv, uv;
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = 0; b < 3; ++b) {
            if (!is_zero_literal(dv[a]) && !is_zero_literal(dv[b]))
                vv.push_back(g_inv.at({a, b}) * dv[a] * dv[b]);
            if (!is_zero_literal(du[a]) && !is_zero_literal(dv[b]))
                uv.push_back(g_inv.at({a, b}) * du[a] * dv[b]);
        }
    EwmResiduals out;
    out.res_u = box_scalar(g, rd.u) +
                make_number(Rational(1, 2)) * em4u * make_sum(std::move(vv));
    std::vector<ExprPtr> divv;
    for (size_t m = 0; m < 3; ++m) {
        std::vector<ExprPtr> inner;
        for (size_t n2 = 0; n2 < 3; ++n2)
            if (!is_zero_literal(dv[n2])) inner.push_back(g_inv.at({m, n2}) * dv[n2]);
        divv.push_back(differentiate(vol * make_sum(std::move(inner)), c.coords[m]));
    }
    out.res_v = make_power(vol, -1) * make_sum(std::move(divv)) -
                num(4) * make_sum(std::move(uv));
    for (const auto& b : c.sample(points, seed)) {
        Evaluator ev(b);
        out.max_u = std::max(out.max_u, std::abs(ev(out.res_u)));
        out.max_v = std::max(out.max_v, std::abs(ev(out.res_v)));
    }
    return out;
}

} // namespace axired
