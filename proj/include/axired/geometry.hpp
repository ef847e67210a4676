#pragma once

#include <vector>

#include "axired/diff.hpp"
#include "axired/metric.hpp"
#include "axired/simplify.hpp"

namespace axired {

// Conventions (the source papers rarely state theirs; these are fixed here
// and exposed in the CLI report):
//   signature (-,+,+,+) with the time index recorded on the chart,
//   R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
//             + Gamma^a_{cs} Gamma^s_{db} - Gamma^a_{ds} Gamma^s_{cb},
//   R_{bd} = R^a_{bad},  E_{ab} = R_{ab} - (1/2) R g_{ab}.

/// Square root of an expression every factor of which is positive on the
/// chart interior (determinants after sign fixing, Killing norms off the
/// axis). Distributes over products and halves exponents, which is only
/// valid under that positivity assumption; the general make_power keeps
/// sqrt(x^2) unevaluated.
inline ExprPtr sqrt_chart_positive(const ExprPtr& e) {
    if (e->kind == Kind::Product) {
        std::vector<ExprPtr> ks(e->kids);
        // a negative numeric coefficient must belong to some sum factor that
        // is itself negative on the chart; fold the sign in before splitting
        if (!ks.empty() && ks[0]->kind == Kind::Number && ks[0]->value < 0)
            for (auto& k : ks)
                if (k->kind == Kind::Sum) {
                    k = make_neg(k);
                    ks[0] = make_number(-ks[0]->value);
                    break;
                }
        std::vector<ExprPtr> fs;
        for (const auto& k : ks) fs.push_back(sqrt_chart_positive(k));
        return make_product(std::move(fs));
    }
    if (e->kind == Kind::Power) return make_power(e->kids[0], e->value / 2);
    return make_power(e, Rational(1, 2));
}

inline ExprPtr sqrt_abs_det(const MetricSpec& m) {
    ExprPtr det = simplify(m.determinant());
    if (m.signature() == Signature::Lorentzian) det = make_neg(det);
    return sqrt_chart_positive(det);
}

/// g^{ab} via adjugate over determinant.
inline TensorField inverse_metric(const MetricSpec& m) {
    size_t n = m.dim();
    ExprPtr det = simplify(m.determinant());
    if (is_zero_literal(det)) throw SingularMetricError("metric determinant is identically zero");
    ExprPtr inv_det = make_power(det, -1);
    TensorField g_inv("^ab", n, m.chart());
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i; j < n; ++j) {
            // cofactor C_{ji}; metric symmetric so C_{ij} = C_{ji}
            std::vector<std::vector<ExprPtr>> minor;
            for (size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<ExprPtr> row;
                for (size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(m.at(r, c));
                minor.push_back(std::move(row));
            }
            ExprPtr cof = n == 1 ? one_expr() : MetricSpec::det_rec(minor);
            if ((i + j) % 2 != 0) cof = make_neg(cof);
            ExprPtr e = simplify(cof * inv_det);
            g_inv.set({i, j}, e);
            g_inv.set({j, i}, e);
        }
    }
    return g_inv;
}

/// Gamma^a_{bc}, symmetric in bc.
inline TensorField christoffel(const MetricSpec& m) {
    size_t n = m.dim();
    TensorField g_inv = inverse_metric(m);
    TensorField gamma("^a_bc", n, m.chart());
    // cache d_c g_{ab}
    std::vector<ExprPtr> dg(n * n * n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a; b < n; ++b)
            for (size_t c = 0; c < n; ++c) {
                ExprPtr d = differentiate(m.at(a, b), m.coord(c));
                dg[(a * n + b) * n + c] = d;
                dg[(b * n + a) * n + c] = d;
            }
    auto d_g = [&](size_t a, size_t b, size_t c) { return dg[(a * n + b) * n + c]; };
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = b; c < n; ++c) {
                std::vector<ExprPtr> terms;
                for (size_t d = 0; d < n; ++d) {
                    if (is_zero_literal(g_inv.at({a, d}))) continue;
                    ExprPtr s = make_sum({d_g(d, b, c), d_g(d, c, b), make_neg(d_g(b, c, d))});
                    terms.push_back(make_number(Rational(1, 2)) * g_inv.at({a, d}) * s);
                }
                ExprPtr e = simplify(make_sum(std::move(terms)));
                gamma.set({a, b, c}, e);
                gamma.set({a, c, b}, e);
            }
    return gamma;
}

/// R^a_{bcd}
inline TensorField riemann(const MetricSpec& m) {
    size_t n = m.dim();
    if (n > 4) throw DimensionError("riemann: dimension > 4");
    TensorField gamma = christoffel(m);
    TensorField riem("^a_bcd", n, m.chart());
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                for (size_t d = c + 1; d < n; ++d) {
                    std::vector<ExprPtr> terms;
                    terms.push_back(differentiate(gamma.at({a, d, b}), m.coord(c)));
                    terms.push_back(make_neg(differentiate(gamma.at({a, c, b}), m.coord(d))));
                    for (size_t s = 0; s < n; ++s) {
                        terms.push_back(gamma.at({a, c, s}) * gamma.at({s, d, b}));
                        terms.push_back(make_neg(gamma.at({a, d, s}) * gamma.at({s, c, b})));
                    }
                    ExprPtr e = make_sum(std::move(terms));
                    riem.set({a, b, c, d}, e);
                    riem.set({a, b, d, c}, make_neg(e));
                }
    return riem;
}

/// R_{bd} = R^a_{bad}, contracted directly from Christoffel symbols.
inline TensorField ricci(const MetricSpec& m) {
    size_t n = m.dim();
    if (n > 4) throw DimensionError("ricci: dimension > 4");
    TensorField gamma = christoffel(m);
    TensorField ric("_bd", n, m.chart());
    for (size_t b = 0; b < n; ++b)
        for (size_t d = b; d < n; ++d) {
            std::vector<ExprPtr> terms;
            for (size_t a = 0; a < n; ++a) {
                terms.push_back(differentiate(gamma.at({a, d, b}), m.coord(a)));
                terms.push_back(make_neg(differentiate(gamma.at({a, a, b}), m.coord(d))));
                for (size_t s = 0; s < n; ++s) {
                    terms.push_back(gamma.at({a, a, s}) * gamma.at({s, d, b}));
                    terms.push_back(make_neg(gamma.at({a, d, s}) * gamma.at({s, a, b})));
                }
            }
            ExprPtr e = make_sum(std::move(terms));
            ric.set({b, d}, e);
            ric.set({d, b}, e);
        }
    return ric;
}

inline ExprPtr ricci_scalar(const MetricSpec& m) {
    TensorField ric = ricci(m);
    TensorField g_inv = inverse_metric(m);
    size_t n = m.dim();
    std::vector<ExprPtr> terms;
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) terms.push_back(g_inv.at({a, b}) * ric.at({a, b}));
    return make_sum(std::move(terms));
}

/// E_{ab} = R_{ab} - (1/2) R g_{ab}
inline TensorField einstein_tensor(const MetricSpec& m) {
    TensorField ric = ricci(m);
    TensorField g_inv = inverse_metric(m);
    size_t n = m.dim();
    std::vector<ExprPtr> tr;
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) tr.push_back(g_inv.at({a, b}) * ric.at({a, b}));
    ExprPtr scalar = make_sum(std::move(tr));
    TensorField e("_ab", n, m.chart());
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a; b < n; ++b) {
            ExprPtr c = ric.at({a, b}) - make_number(Rational(1, 2)) * scalar * m.at(a, b);
            e.set({a, b}, c);
            e.set({b, a}, c);
        }
    return e;
}

/// Covariant wave operator: (1/sqrt|g|) d_nu ( sqrt|g| g^{mu nu} d_mu s ).
inline ExprPtr box_scalar(const MetricSpec& m, const ExprPtr& s) {
    size_t n = m.dim();
    TensorField g_inv = inverse_metric(m);
    ExprPtr vol = sqrt_abs_det(m);
    std::vector<ExprPtr> terms;
    for (size_t nu = 0; nu < n; ++nu) {
        std::vector<ExprPtr> inner;
        for (size_t mu = 0; mu < n; ++mu) {
            if (is_zero_literal(g_inv.at({mu, nu}))) continue;
            inner.push_back(g_inv.at({mu, nu}) * differentiate(s, m.coord(mu)));
        }
        ExprPtr flux = vol * make_sum(std::move(inner));
        terms.push_back(differentiate(flux, m.coord(nu)));
    }
    return simplify(make_power(vol, -1) * make_sum(std::move(terms)));
}

/// Hessian nabla_a nabla_b s.
inline TensorField hessian(const MetricSpec& m, const ExprPtr& s, const TensorField& gamma) {
    size_t n = m.dim();
    TensorField h("_ab", n, m.chart());
    std::vector<ExprPtr> ds(n);
    for (size_t a = 0; a < n; ++a) ds[a] = differentiate(s, m.coord(a));
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a; b < n; ++b) {
            std::vector<ExprPtr> terms{differentiate(ds[a], m.coord(b))};
            for (size_t c = 0; c < n; ++c)
                terms.push_back(make_neg(gamma.at({c, a, b}) * ds[c]));
            ExprPtr e = make_sum(std::move(terms));
            h.set({a, b}, e);
            h.set({b, a}, e);
        }
    return h;
}

/// Conformal transform of the wave operator for n = 3:
/// box_{e^{2 psi} g} s = e^{-2 psi} (box_g s + g^{mu nu} d_nu psi d_mu s).
inline ExprPtr conformal_box(const MetricSpec& m, const ExprPtr& psi, const ExprPtr& s) {
    if (m.dim() != 3) throw DimensionError("conformal_box: formula is for n = 3");
    TensorField g_inv = inverse_metric(m);
    std::vector<ExprPtr> terms{box_scalar(m, s)};
    for (size_t mu = 0; mu < 3; ++mu)
        for (size_t nu = 0; nu < 3; ++nu) {
            if (is_zero_literal(g_inv.at({mu, nu}))) continue;
            terms.push_back(g_inv.at({mu, nu}) * differentiate(psi, m.coord(nu)) *
                            differentiate(s, m.coord(mu)));
        }
    return exp_(make_number(-2) * psi) * make_sum(std::move(terms));
}

/// Conformal transform of the Ricci tensor for n = 3:
/// Ric[e^{2 psi} g] = Ric - g box psi - Hess psi + d psi d psi - g |d psi|^2.
inline TensorField conformal_ricci(const MetricSpec& m, const ExprPtr& psi) {
    if (m.dim() != 3) throw DimensionError("conformal_ricci: formula is for n = 3");
    size_t n = 3;
    TensorField ric = ricci(m);
    TensorField gamma = christoffel(m);
    TensorField g_inv = inverse_metric(m);
    TensorField hess = hessian(m, psi, gamma);
    std::vector<ExprPtr> dpsi(n);
    for (size_t a = 0; a < n; ++a) dpsi[a] = differentiate(psi, m.coord(a));
    std::vector<ExprPtr> box_terms, grad_terms;
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            if (is_zero_literal(g_inv.at({a, b}))) continue;
            box_terms.push_back(g_inv.at({a, b}) * hess.at({a, b}));
            grad_terms.push_back(g_inv.at({a, b}) * dpsi[a] * dpsi[b]);
        }
    ExprPtr box_psi = make_sum(std::move(box_terms));
    ExprPtr grad_sq = make_sum(std::move(grad_terms));
    TensorField out("_ab", n, m.chart());
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a; b < n; ++b) {
            ExprPtr e = ric.at({a, b}) - m.at(a, b) * box_psi - hess.at({a, b}) +
                        dpsi[a] * dpsi[b] - m.at(a, b) * grad_sq;
            out.set({a, b}, e);
            out.set({b, a}, e);
        }
    return out;
}

/// Metric rescaled by a positive conformal factor (the factor itself, not its log).
inline MetricSpec scale_metric(const MetricSpec& m, const ExprPtr& factor) {
    MetricSpec out(m.chart(), m.signature(), m.time_index());
    for (size_t i = 0; i < m.dim(); ++i)
        for (size_t j = i; j < m.dim(); ++j) out.set(i, j, simplify(factor * m.at(i, j)));
    return out;
}

} // namespace axired
