#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace axired {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes/weights on [0,1], computed once per order by Newton
/// iteration on the Legendre recurrence.
inline const std::vector<std::pair<double, double>>& gauss_legendre_01(int n) {
    static std::vector<std::vector<std::pair<double, double>>> cache(65);
    if (n < 1 || n > 64) throw QuadratureError("gauss_legendre_01: order out of range");
    auto& out = cache[n];
    if (!out.empty()) return out;
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p1 = 0, dp = 0;
        for (int it = 0; it < 100; ++it) {
            double a = 1, b = x;
            for (int k = 2; k <= n; ++k) {
                double c = ((2 * k - 1) * x * b - (k - 1) * a) / k;
                a = b;
                b = c;
            }
            p1 = b;
            dp = n * (x * b - a) / (x * x - 1);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        out.emplace_back(0.5 * (x + 1), 1.0 / ((1 - x * x) * dp * dp));
    }
    return out;
}

/// Composite Simpson with n panels (n even); exposed for order tests.
inline double simpson_fixed(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) throw QuadratureError("simpson_fixed: need even panel count");
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth > 48) throw QuadratureError("adaptive quadrature failed to converge");
    if (std::abs(delta) <= 15 * tol)
        return left + right + delta / 15;  // Richardson correction
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth + 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth + 1);
}

} // namespace detail

/// Adaptive Simpson with Richardson refinement; relative tolerance with an
/// absolute floor of 1e-12.
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    double tol = std::max(std::abs(whole) * rel_tol, 1e-12);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0);
}

/// Iterated adaptive Simpson over [ax,bx] x [ay,by].
inline double integrate_2d(const std::function<double(double, double)>& f, double ax, double bx,
                           double ay, double by, double rel_tol = 1e-8) {
    return integrate_1d(
        [&](double x) {
            return integrate_1d([&](double y) { return f(x, y); }, ay, by, rel_tol / 4);
        },
        ax, bx, rel_tol);
}

} // namespace axired
