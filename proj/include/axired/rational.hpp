#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace axired {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// p/q with sign normalization (cpp_rational rejects negative denominators).
inline Rational make_frac(BigInt p, BigInt q) {
    if (q < 0) { p = -p; q = -q; }
    return Rational(std::move(p), std::move(q));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational_pow(const Rational& base, const BigInt& exp) {
    unsigned n = static_cast<unsigned>(abs(exp));
    Rational r = 1;
    Rational b = base;
    for (unsigned i = 0; i < n; ++i) r *= b;
    if (exp < 0) r = Rational(1) / r;
    return r;
}

/// Exact integer k-th root, if one exists.
inline std::optional<BigInt> try_exact_root(const BigInt& n, unsigned k) {
    if (n < 0) return std::nullopt;
    if (n == 0 || n == 1) return n;
    BigInt lo = 1, hi = n;
    while (lo <= hi) {
        BigInt mid = (lo + hi) / 2;
        BigInt p = boost::multiprecision::pow(mid, k);
        if (p == n) return mid;
        if (p < n) lo = mid + 1; else hi = mid - 1;
    }
    return std::nullopt;
}

/// Exact base^(p/d) as a rational, if the roots are exact.
inline std::optional<Rational> try_exact_rational_pow(const Rational& base, const Rational& exp) {
    BigInt p = numerator(exp), d = denominator(exp);
    if (d == 1) {
        if (base == 0 && p < 0) return std::nullopt;
        return rational_pow(base, p);
    }
    Rational b = base;
    bool neg = false;
    if (b < 0) {
        if (d % 2 == 0) return std::nullopt;
        b = -b;
        neg = (p % 2 != 0);
    }
    unsigned k = d.convert_to<unsigned>();
    auto rn = try_exact_root(numerator(b), k);
    auto rd = try_exact_root(denominator(b), k);
    if (!rn || !rd) return std::nullopt;
    Rational root(*rn, *rd);
    Rational r = rational_pow(root, abs(p));
    if (p < 0) {
        if (r == 0) return std::nullopt;
        r = Rational(1) / r;
    }
    return neg ? -r : r;
}

inline std::string rational_str(const Rational& q) {
    if (is_integer(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

} // namespace axired
