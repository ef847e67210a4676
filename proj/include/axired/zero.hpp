#pragma once

#include <cmath>
#include <cstdlib>

#include "axired/chart.hpp"
#include "axired/simplify.hpp"

namespace axired {

enum class ZeroVerdict { ProvablyZero, NumericallyZero, Nonzero };

/// Semantic zero test. Symbolic simplification is incomplete, so anything
/// that does not collapse to the literal 0 is sampled at quasi-random chart
/// interior points and compared against the local cancellation scale (the
/// magnitudes of the summands that cancel).
inline ZeroVerdict is_zero(const ExprPtr& e, const Chart& chart, size_t points = 20,
                           unsigned seed = 42, double tol = 1e-9) {
    ExprPtr s = simplify(e);
    if (is_zero_literal(s)) return ZeroVerdict::ProvablyZero;
    for (const auto& b : chart.sample(points, seed)) {
        Evaluator ev(b);
        double val = ev(s);
        double scale = 0;
        if (s->kind == Kind::Sum) {
            for (const auto& k : s->kids) scale += std::abs(ev(k));
        } else {
            scale = std::abs(val);
        }
        if (std::abs(val) >= tol * (1.0 + scale)) return ZeroVerdict::Nonzero;
    }
    return ZeroVerdict::NumericallyZero;
}

inline bool is_zero_ok(ZeroVerdict v) { return v != ZeroVerdict::Nonzero; }

} // namespace axired
