#pragma once

#include <cmath>

#include "axired/diff.hpp"
#include "axired/eval.hpp"

namespace axired {

/// Radial data (u(r), p(r)) for the rotationally symmetric wave map into a
/// surface of revolution with generating function f(u). p is the
/// slicing-normalized velocity e^{-Omega} dt u, so the lapse never needs to
/// be solved for. Profiles are closed-form expressions in the symbol r,
/// treated as identically zero beyond r_max.
struct EquivariantData {
    ExprPtr u_expr;   // in symbol "r"
    ExprPtr p_expr;   // in symbol "r"
    ExprPtr f_expr;   // in symbol "u"
    double r_max = 0;

    double u(double r) const {
        if (r >= r_max) return 0;
        return evaluate(u_expr, {{"r", r}});
    }
    double du(double r) const {
        if (r >= r_max) return 0;
        if (!du_cache_) du_cache_ = differentiate(u_expr, "r");
        return evaluate(du_cache_, {{"r", r}});
    }
    double p(double r) const {
        if (r >= r_max) return 0;
        return evaluate(p_expr, {{"r", r}});
    }
    double f(double uval) const { return evaluate(f_expr, {{"u", uval}}); }

    /// Local energy density of the constraint right-hand side,
    /// (1/2)(p^2 + chi^2 u'^2 + f(u)^2 / r^2), with chi = e^{-gamma}.
    double density(double r, double chi) const {
        if (r <= 0 || r >= r_max) return 0;
        double ur = du(r), pv = p(r), fu = f(u(r));
        return 0.5 * (pv * pv + chi * chi * ur * ur + fu * fu / (r * r));
    }

private:
    mutable ExprPtr du_cache_;
};

} // namespace axired
