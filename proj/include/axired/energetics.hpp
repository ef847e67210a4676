#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "axired/equivariant.hpp"
#include "axired/geometry.hpp"
#include "axired/quadrature.hpp"

namespace axired {

struct InsufficientSamplesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonDecayingMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One scalar component of a wave map, with its diagonal target-metric
/// weight (an expression in the chart coordinates, e.g. (1/4) e^{-4u} for
/// the hyperbolic-plane twist direction).
struct ScalarField {
    ExprPtr component;
    ExprPtr weight;
};

/// Same, but the component enters only through its gradient one-form (used
/// when the scalar itself is known only up to a path integral, e.g. dv = G).
struct GradientField {
    TensorField grad;  // "_a"
    ExprPtr weight;
};

namespace detail {

inline TensorField stress_from_gradients(const MetricSpec& g,
                                         const std::vector<std::vector<ExprPtr>>& grads,
                                         const std::vector<ExprPtr>& weights) {
    size_t n = g.dim();
    TensorField g_inv = inverse_metric(g);
    // <d^s U, d_s U>_h = sum_i w_i g^{ab} d_a phi_i d_b phi_i
    std::vector<ExprPtr> norm_terms;
    for (size_t i = 0; i < grads.size(); ++i)
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) {
                if (is_zero_literal(grads[i][a]) || is_zero_literal(grads[i][b])) continue;
                norm_terms.push_back(weights[i] * g_inv.at({a, b}) * grads[i][a] * grads[i][b]);
            }
    ExprPtr norm = make_sum(std::move(norm_terms));
    TensorField t("_ab", n, g.chart());
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a; b < n; ++b) {
            std::vector<ExprPtr> terms;
            for (size_t i = 0; i < grads.size(); ++i)
                terms.push_back(weights[i] * grads[i][a] * grads[i][b]);
            ExprPtr e = simplify(make_sum(std::move(terms)) -
                                 make_number(Rational(1, 2)) * g.at(a, b) * norm);
            t.set({a, b}, e);
            t.set({b, a}, e);
        }
    return t;
}

} // namespace detail

/// T_{ab} = sum_i w_i d_a phi_i d_b phi_i - (1/2) g_{ab} <d^s U, d_s U>_h.
inline TensorField stress_energy(const MetricSpec& g, const std::vector<ScalarField>& fields) {
    size_t n = g.dim();
    std::vector<std::vector<ExprPtr>> grads;
    std::vector<ExprPtr> weights;
    for (const auto& f : fields) {
        std::vector<ExprPtr> d(n);
        for (size_t a = 0; a < n; ++a) d[a] = differentiate(f.component, g.coord(a));
        grads.push_back(std::move(d));
        weights.push_back(f.weight);
    }
    return detail::stress_from_gradients(g, grads, weights);
}

inline TensorField stress_energy(const MetricSpec& g, const std::vector<GradientField>& fields) {
    size_t n = g.dim();
    std::vector<std::vector<ExprPtr>> grads;
    std::vector<ExprPtr> weights;
    for (const auto& f : fields) {
        std::vector<ExprPtr> d(n);
        for (size_t a = 0; a < n; ++a) d[a] = f.grad.at({a});
        grads.push_back(std::move(d));
        weights.push_back(f.weight);
    }
    return detail::stress_from_gradients(g, grads, weights);
}

/// T(N,N) with N = lapse^{-1} d_t the unit timelike normal of the static
/// slicing: T_{tt} / lapse^2.
inline ExprPtr t_nn(const MetricSpec& g, const TensorField& t, const ExprPtr& lapse) {
    size_t ti = g.time_index() < 0 ? 0 : static_cast<size_t>(g.time_index());
    return simplify(t.at({ti, ti}) * make_power(lapse, -2));
}

/// Static lapse sqrt(-g_tt) for block-diagonal-in-time metrics.
inline ExprPtr static_lapse(const MetricSpec& g) {
    size_t ti = g.time_index() < 0 ? 0 : static_cast<size_t>(g.time_index());
    return sqrt_chart_positive(simplify(make_neg(g.at(ti, ti))));
}

/// E(R, eps) = int_{r0}^{R} int_{eps}^{pi-eps} T(N,N) sqrt(q) dtheta dr,
/// with sqrt(q) the volume element of the spatial block of g.
inline double energy_cutoff(const MetricSpec& g, const TensorField& t, double r0, double R,
                            double eps, double rel_tol = 1e-8) {
    if (!(r0 > 0) || !(R > r0) || !(eps > 0 && eps < M_PI / 2))
        throw QuadratureError("energy_cutoff: need 0 < r0 < R and 0 < eps < pi/2");
    ExprPtr tnn = t_nn(g, t, static_lapse(g));
    // spatial block determinant (coordinates r, theta)
    size_t ti = g.time_index() < 0 ? 0 : static_cast<size_t>(g.time_index());
    std::vector<size_t> sp;
    for (size_t i = 0; i < g.dim(); ++i)
        if (i != ti) sp.push_back(i);
    ExprPtr det_q = simplify(g.at(sp[0], sp[0]) * g.at(sp[1], sp[1]) -
                             g.at(sp[0], sp[1]) * g.at(sp[0], sp[1]));
    ExprPtr integrand = simplify(tnn * sqrt_chart_positive(det_q));
    Binding base = g.chart().params;
    base["t"] = 0.0;
    return integrate_2d(
        [&](double r, double th) {
            Binding b = base;
            b["r"] = r;
            b["theta"] = th;
            return evaluate(integrand, b);
        },
        r0, R, eps, M_PI - eps, rel_tol);
}

enum class EnergyVerdict { Convergent, LogDivergent, PowerDivergent };

struct EnergyReport {
    std::vector<std::pair<double, double>> samples;  // (R, E)
    double c1 = 0, c0 = 0;      // fit E = c1 ln R + c0
    double fit_residual = 0;    // relative RMS residual of the fit
    EnergyVerdict verdict = EnergyVerdict::Convergent;
};

/// Least-squares fit of E against ln R with verdict rules:
/// convergent when E is Cauchy (rel. cauchy_tol) over the last decade;
/// log-divergent when c1 > 0 with relative fit residual < fit_tol;
/// power-divergent otherwise.
inline EnergyReport divergence_fit(std::vector<std::pair<double, double>> samples,
                                   double fit_tol = 1e-3, double cauchy_tol = 1e-6) {
    if (samples.size() < 5)
        throw InsufficientSamplesError("divergence_fit: need at least 5 samples");
    std::sort(samples.begin(), samples.end());
    double span = samples.back().first / samples.front().first;
    if (span < 100.0)
        throw InsufficientSamplesError("divergence_fit: samples must span >= 2 decades in R");
    EnergyReport rep;
    rep.samples = samples;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = samples.size();
    for (const auto& [R, E] : samples) {
        double x = std::log(R);
        sx += x;
        sy += E;
        sxx += x * x;
        sxy += x * E;
    }
    double denom = n * sxx - sx * sx;
    rep.c1 = (n * sxy - sx * sy) / denom;
    rep.c0 = (sy - rep.c1 * sx) / n;
    double ss = 0, scale = 0;
    for (const auto& [R, E] : samples) {
        double r = E - (rep.c1 * std::log(R) + rep.c0);
        ss += r * r;
        scale += E * E;
    }
    rep.fit_residual = std::sqrt(ss / std::max(scale, 1e-300));

    double rmax = samples.back().first;
    double emax = samples.back().second;
    bool cauchy = true;
    for (const auto& [R, E] : samples)
        if (R >= rmax / 10 &&
            std::abs(E - emax) > cauchy_tol * std::max(1.0, std::abs(emax)))
            cauchy = false;
    if (cauchy)
        rep.verdict = EnergyVerdict::Convergent;
    else if (rep.c1 > 0 && rep.fit_residual < fit_tol)
        rep.verdict = EnergyVerdict::LogDivergent;
    else
        rep.verdict = EnergyVerdict::PowerDivergent;
    return rep;
}

/// ADM mass of an asymptotically Cartesian 3-metric by the flux integral
/// (1/16 pi) oint delta^{kl} (d_k q_{il} - d_i q_{lk}) n^i dA, evaluated at
/// the given radii with finite-difference derivatives and sphere quadrature,
/// then Richardson-extrapolated in 1/R.
inline double adm_mass(const MetricSpec& q3, std::vector<double> radii = {1e2, 1e3, 1e4}) {
    if (q3.dim() != 3) throw DimensionError("adm_mass: need a 3-metric");
    const Chart& c = q3.chart();
    auto comp_at = [&](size_t i, size_t l, const std::array<double, 3>& x) {
        Binding b = c.params;
        b[c.coords[0]] = x[0];
        b[c.coords[1]] = x[1];
        b[c.coords[2]] = x[2];
        return evaluate(q3.at(i, l), b);
    };
    std::vector<double> masses;
    const auto& gl = gauss_legendre_01(24);
    const int nphi = 48;
    for (double R : radii) {
        double h = 0.01 * R;
        double total = 0;
        for (const auto& [xc, wc] : gl) {
            double ct = 2 * xc - 1;  // cos(theta) in [-1,1]
            double st = std::sqrt(std::max(0.0, 1 - ct * ct));
            for (int j = 0; j < nphi; ++j) {
                double ph = 2 * M_PI * (j + 0.5) / nphi;
                std::array<double, 3> x{R * st * std::cos(ph), R * st * std::sin(ph), R * ct};
                std::array<double, 3> nvec{x[0] / R, x[1] / R, x[2] / R};
                double flux = 0;
                for (size_t i = 0; i < 3; ++i)
                    for (size_t k = 0; k < 3; ++k) {
                        std::array<double, 3> xp = x, xm = x;
                        xp[k] += h;
                        xm[k] -= h;
                        double dk_qik = (comp_at(i, k, xp) - comp_at(i, k, xm)) / (2 * h);
                        xp = x;
                        xm = x;
                        xp[i] += h;
                        xm[i] -= h;
                        double di_qkk = (comp_at(k, k, xp) - comp_at(k, k, xm)) / (2 * h);
                        flux += (dk_qik - di_qkk) * nvec[i];
                    }
                // dA = R^2 sin(theta) dtheta dphi = R^2 d(cos theta) dphi
                total += flux * wc * 2.0 * (2 * M_PI / nphi) * R * R;
            }
        }
        masses.push_back(total / (16 * M_PI));
    }
    if (masses.size() == 1) return masses[0];
    // decay check: successive differences must shrink
    for (size_t i = 2; i < masses.size(); ++i) {
        double d1 = std::abs(masses[i - 1] - masses[i - 2]);
        double d2 = std::abs(masses[i] - masses[i - 1]);
        if (d2 > 0.9 * d1 && d2 > 1e-10)
            throw NonDecayingMetricError("adm_mass: flux integral is not Cauchy in R");
    }
    // Richardson in 1/R from the last two radii, model m(R) = m + c/R
    double r1 = radii[radii.size() - 2], r2 = radii.back();
    double m1 = masses[masses.size() - 2], m2 = masses.back();
    return (m2 * r2 - m1 * r1) / (r2 - r1);
}

enum class ConstraintStatus { Subcritical, Supercritical };

struct ConstraintSolution {
    std::vector<double> r, chi, dchi;  // grid, chi = e^{-gamma}, and chi'
    ConstraintStatus status = ConstraintStatus::Subcritical;
    double r_star = 0;      // first radius with chi -> 0 (supercritical only)
    double chi_inf = 1;
    double gamma_inf = 0;
    double m_av = 0;
    double angle_deficit = 0;
    double energy = 0;      // 2 pi (1 - chi_inf)

    /// cubic-Hermite interpolation of chi on the solver grid
    double chi_at(double rv) const {
        if (rv <= r.front()) return chi.front();
        if (rv >= r.back()) return chi.back();
        size_t i = std::upper_bound(r.begin(), r.end(), rv) - r.begin() - 1;
        double h = r[i + 1] - r[i], s = (rv - r[i]) / h;
        double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        return h00 * chi[i] + h10 * h * dchi[i] + h01 * chi[i + 1] + h11 * h * dchi[i + 1];
    }
};

/// Integrate the Hamiltonian constraint chi' = -(r/chi) rho(r, chi) with
/// chi(0) = 1 by RK4, halving the step whenever |delta chi| > 1e-3.
inline ConstraintSolution solve_constraint(const EquivariantData& data,
                                           double max_dchi = 1e-3) {
    ConstraintSolution sol;
    double r_end = data.r_max;
    if (!(r_end > 0)) throw std::invalid_argument("solve_constraint: r_max must be positive");
    auto rhs = [&](double r, double chi) {
        if (chi <= 0) return 0.0;
        return -(r / chi) * data.density(r, chi);
    };
    double r = 0, chi = 1, h = r_end / 2048;
    sol.r.push_back(r);
    sol.chi.push_back(chi);
    sol.dchi.push_back(0);
    while (r < r_end) {
        double step = std::min(h, r_end - r);
        for (;;) {
            double k1 = rhs(r, chi);
            double k2 = rhs(r + step / 2, chi + step / 2 * k1);
            double k3 = rhs(r + step / 2, chi + step / 2 * k2);
            double k4 = rhs(r + step, chi + step * k3);
            double dchi = step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
            double next = chi + dchi;
            if ((std::abs(dchi) > max_dchi || next <= 1e-8) && step > 1e-12 * r_end) {
                step /= 2;
                continue;
            }
            if (next <= 1e-8) {
                sol.status = ConstraintStatus::Supercritical;
                sol.r_star = r + step;
                sol.chi_inf = 0;
                sol.gamma_inf = HUGE_VAL;
                sol.m_av = 2;
                sol.angle_deficit = 2 * M_PI;
                sol.energy = 2 * M_PI;
                return sol;
            }
            r += step;
            chi = next;
            sol.r.push_back(r);
            sol.chi.push_back(chi);
            sol.dchi.push_back(rhs(r, chi));
            break;
        }
    }
    // density vanishes beyond r_max, so chi has reached its plateau
    sol.chi_inf = chi;
    sol.gamma_inf = -std::log(chi);
    sol.m_av = 2 * (1 - chi);
    sol.angle_deficit = M_PI * sol.m_av;  // = 2 pi (1 - chi_inf), written so the
                                          // identity deficit = pi m_AV is exact
    sol.energy = 2 * M_PI * (1 - chi);
    return sol;
}

/// Independent direct-quadrature energy 2 pi int rho(r, chi) e^{gamma} r dr
/// (sqrt(q) = e^{gamma} r), using the interpolated chi from the solution.
inline double direct_energy(const EquivariantData& data, const ConstraintSolution& sol,
                            double rel_tol = 1e-9) {
    return 2 * M_PI *
           integrate_1d(
               [&](double r) {
                   double chi = sol.chi_at(r);
                   return data.density(r, chi) * r / chi;
               },
               0, data.r_max, rel_tol);
}

struct MassReport {
    double m_av = 0, angle_deficit = 0, energy_ode = 0, energy_quadrature = 0;
    bool deficit_identity_exact = false;  // deficit == pi m_AV bitwise
    bool mass_in_range = false;           // 0 <= m_AV < 2
    double energy_rel_err = 0;
};

inline MassReport mass_identities(const ConstraintSolution& sol, const EquivariantData& data) {
    if (sol.status != ConstraintStatus::Subcritical)
        throw std::invalid_argument("mass_identities: solution must be subcritical");
    MassReport rep;
    rep.m_av = sol.m_av;
    rep.angle_deficit = sol.angle_deficit;
    rep.energy_ode = sol.energy;
    rep.energy_quadrature = direct_energy(data, sol);
    rep.deficit_identity_exact = (sol.angle_deficit == M_PI * sol.m_av);
    rep.mass_in_range = (sol.m_av >= 0 && sol.m_av < 2);
    rep.energy_rel_err = std::abs(rep.energy_ode - rep.energy_quadrature) /
                         std::max(std::abs(rep.energy_ode), 1e-300);
    return rep;
}

} // namespace axired
