#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "axired/rational.hpp"

namespace axired {

// Immutable expression trees in canonical form. Canonicalization happens in
// the smart constructors (make_sum, make_product, make_power, ...), so every
// Expr reachable through the public API is already canonical:
//   - sums and products are flattened n-ary nodes with sorted children,
//   - numeric constants are exact rationals and folded eagerly,
//   - like terms are collected, equal bases merged into powers,
//   - a/b is represented as a * b^(-1); there is no division node.

enum class Kind { Number, Symbol, Call, Sum, Product, Power };

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

inline const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
        case Func::Sinh: return "sinh";
        case Func::Cosh: return "cosh";
    }
    return "?";
}

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
    Kind kind;
    Rational value;             // Number payload; Power exponent
    std::string name;           // Symbol payload
    Func fn = Func::Sin;        // Call payload
    std::vector<ExprPtr> kids;  // Call: 1 (argument); Power: 1 (base); Sum/Product: >= 2
    std::uint64_t hash = 0;

    Expr(Kind k, Rational v, std::string n, Func f, std::vector<ExprPtr> c)
        : kind(k), value(std::move(v)), name(std::move(n)), fn(f), kids(std::move(c)) {
        hash = compute_hash();
    }

private:
    std::uint64_t compute_hash() const {
        auto mix = [](std::uint64_t h, std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            return h;
        };
        std::uint64_t h = static_cast<std::uint64_t>(kind) * 0x100000001b3ull;
        if (kind == Kind::Number || kind == Kind::Power) {
            double d = to_double(value);
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(d));
            std::memcpy(&bits, &d, sizeof(bits));
            h = mix(h, bits);
            h = mix(h, std::hash<std::string>{}(rational_str(value)));
        }
        if (kind == Kind::Symbol) h = mix(h, std::hash<std::string>{}(name));
        if (kind == Kind::Call) h = mix(h, static_cast<std::uint64_t>(fn));
        for (const auto& k : kids) h = mix(h, k->hash);
        return h;
    }
};

// ---- structural comparison -------------------------------------------------

int compare(const ExprPtr& a, const ExprPtr& b);

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash) return false;
    return compare(a, b) == 0;
}

inline int kind_rank(Kind k) {
    switch (k) {
        case Kind::Number: return 0;
        case Kind::Symbol: return 1;
        case Kind::Call: return 2;
        case Kind::Power: return 3;
        case Kind::Product: return 4;
        case Kind::Sum: return 5;
    }
    return 6;
}

inline int compare(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return 0;
    int ra = kind_rank(a->kind), rb = kind_rank(b->kind);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a->kind) {
        case Kind::Number:
            if (a->value == b->value) return 0;
            return a->value < b->value ? -1 : 1;
        case Kind::Symbol:
            return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
        case Kind::Call: {
            if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
            return compare(a->kids[0], b->kids[0]);
        }
        case Kind::Power: {
            int c = compare(a->kids[0], b->kids[0]);
            if (c != 0) return c;
            if (a->value == b->value) return 0;
            return a->value < b->value ? -1 : 1;
        }
        case Kind::Sum:
        case Kind::Product: {
            size_t n = std::min(a->kids.size(), b->kids.size());
            for (size_t i = 0; i < n; ++i) {
                int c = compare(a->kids[i], b->kids[i]);
                if (c != 0) return c;
            }
            if (a->kids.size() != b->kids.size())
                return a->kids.size() < b->kids.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

struct ExprLess {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return compare(a, b) < 0; }
};

// ---- smart constructors ----------------------------------------------------

inline ExprPtr make_number(Rational q) {
    return std::make_shared<Expr>(Kind::Number, std::move(q), "", Func::Sin, std::vector<ExprPtr>{});
}

inline ExprPtr make_symbol(std::string n) {
    return std::make_shared<Expr>(Kind::Symbol, Rational(0), std::move(n), Func::Sin,
                                  std::vector<ExprPtr>{});
}

inline const ExprPtr& zero_expr() {
    static const ExprPtr z = make_number(0);
    return z;
}
inline const ExprPtr& one_expr() {
    static const ExprPtr o = make_number(1);
    return o;
}

inline bool is_number(const ExprPtr& e, const Rational& q) {
    return e->kind == Kind::Number && e->value == q;
}
inline bool is_zero_literal(const ExprPtr& e) { return is_number(e, 0); }
inline bool is_one_literal(const ExprPtr& e) { return is_number(e, 1); }

ExprPtr make_sum(std::vector<ExprPtr> terms);
ExprPtr make_product(std::vector<ExprPtr> factors);
ExprPtr make_power(ExprPtr base, Rational exp);
ExprPtr make_call(Func f, ExprPtr arg);

inline ExprPtr make_neg(const ExprPtr& e) { return make_product({make_number(-1), e}); }
inline ExprPtr make_sub(const ExprPtr& a, const ExprPtr& b) { return make_sum({a, make_neg(b)}); }
inline ExprPtr make_div(const ExprPtr& a, const ExprPtr& b) {
    return make_product({a, make_power(b, -1)});
}

// Split a canonical term into (rational coefficient, remaining factor or null).
inline std::pair<Rational, ExprPtr> coeff_split(const ExprPtr& e) {
    if (e->kind == Kind::Number) return {e->value, nullptr};
    if (e->kind == Kind::Product && e->kids[0]->kind == Kind::Number) {
        if (e->kids.size() == 2) return {e->kids[0]->value, e->kids[1]};
        std::vector<ExprPtr> rest(e->kids.begin() + 1, e->kids.end());
        auto r = std::make_shared<Expr>(Kind::Product, Rational(0), "", Func::Sin, std::move(rest));
        return {e->kids[0]->value, r};
    }
    return {Rational(1), e};
}

// Rebuild coefficient * key as a canonical term.
inline ExprPtr coeff_join(const Rational& c, const ExprPtr& key) {
    if (!key) return make_number(c);
    if (c == 0) return zero_expr();
    if (c == 1) return key;
    std::vector<ExprPtr> kids;
    kids.push_back(make_number(c));
    if (key->kind == Kind::Product)
        kids.insert(kids.end(), key->kids.begin(), key->kids.end());
    else
        kids.push_back(key);
    return std::make_shared<Expr>(Kind::Product, Rational(0), "", Func::Sin, std::move(kids));
}

// Negate every term of a canonical sum without re-canonicalizing (keys and
// their order are unchanged by a sign flip).
inline ExprPtr negate_sum_terms(const ExprPtr& s) {
    std::vector<ExprPtr> kids;
    for (const auto& k : s->kids) {
        auto [c, key] = coeff_split(k);
        kids.push_back(coeff_join(-c, key));
    }
    return std::make_shared<Expr>(Kind::Sum, Rational(0), "", Func::Sin, std::move(kids));
}

// Split a factor into (base, exponent).
inline std::pair<ExprPtr, Rational> power_split(const ExprPtr& e) {
    if (e->kind == Kind::Power) return {e->kids[0], e->value};
    return {e, Rational(1)};
}

namespace detail {

// which(x)^2 * R  ->  partner_key = other(x)^2 * R (with exponents merged),
// used for the Pythagorean merge inside make_sum. Matching on either trig
// side catches both sin^2 R + cos^2 R and e.g. sin^-4 cos^2 R + sin^-2 R.
inline bool find_trig_sq(const ExprPtr& key, Func which, Func other, ExprPtr& arg,
                         ExprPtr& partner_key) {
    auto is_sq = [&](const ExprPtr& f) -> ExprPtr {
        if (f->kind == Kind::Power && f->value == 2 && f->kids[0]->kind == Kind::Call &&
            f->kids[0]->fn == which)
            return f->kids[0]->kids[0];
        return nullptr;
    };
    if (auto a = is_sq(key)) {
        arg = a;
        partner_key = make_power(make_call(other, a), 2);
        return true;
    }
    if (key->kind == Kind::Product) {
        for (size_t i = 0; i < key->kids.size(); ++i) {
            if (auto a = is_sq(key->kids[i])) {
                arg = a;
                std::vector<ExprPtr> rest;
                for (size_t j = 0; j < key->kids.size(); ++j)
                    if (j != i) rest.push_back(key->kids[j]);
                rest.push_back(make_power(make_call(other, a), 2));
                partner_key = make_product(std::move(rest));
                return true;
            }
        }
    }
    return false;
}

} // namespace detail

inline ExprPtr make_sum(std::vector<ExprPtr> terms) {
    Rational constant = 0;
    std::map<ExprPtr, Rational, ExprLess> coef;  // key -> coefficient
    std::vector<ExprPtr> work = std::move(terms);
    while (!work.empty()) {
        ExprPtr t = work.back();
        work.pop_back();
        if (t->kind == Kind::Sum) {
            work.insert(work.end(), t->kids.begin(), t->kids.end());
            continue;
        }
        auto [c, key] = coeff_split(t);
        if (!key) {
            constant += c;
            continue;
        }
        if (key->kind == Kind::Sum) {
            // coefficient times a sum: distribute so like terms can cancel
            for (const auto& k : key->kids) work.push_back(make_product({make_number(c), k}));
            continue;
        }
        coef[key] += c;
    }
    // sin^2 + cos^2 -> 1 on matching coefficients; rescan until fixpoint so
    // the result does not depend on map iteration order (keeps make_sum
    // idempotent)
    for (bool merged = true; merged;) {
        merged = false;
        for (auto it = coef.begin(); it != coef.end() && !merged; ++it) {
            for (auto [which, other] : {std::pair{Func::Sin, Func::Cos}, {Func::Cos, Func::Sin}}) {
                ExprPtr arg, partner;
                if (it->second == 0 || !detail::find_trig_sq(it->first, which, other, arg, partner))
                    continue;
                auto jt = coef.find(partner);
                if (jt == coef.end() || jt->second != it->second) continue;
                Rational c = it->second;
                ExprPtr reduced = make_div(it->first, make_power(make_call(which, arg), 2));
                coef.erase(jt);
                coef.erase(it);
                auto [rc, rkey] = coeff_split(make_product({make_number(c), reduced}));
                if (!rkey)
                    constant += rc;
                else
                    coef[rkey] += rc;
                merged = true;
                break;
            }
        }
    }
    std::vector<ExprPtr> out;
    if (constant != 0) out.push_back(make_number(constant));
    for (const auto& [key, c] : coef)
        if (c != 0) out.push_back(coeff_join(c, key));
    if (out.empty()) return zero_expr();
    if (out.size() == 1) return out[0];
    return std::make_shared<Expr>(Kind::Sum, Rational(0), "", Func::Sin, std::move(out));
}

inline ExprPtr make_product(std::vector<ExprPtr> factors) {
    Rational coeff = 1;
    std::map<ExprPtr, Rational, ExprLess> exps;  // base -> exponent
    std::vector<ExprPtr> work = std::move(factors);
    while (!work.empty()) {
        ExprPtr f = work.back();
        work.pop_back();
        if (f->kind == Kind::Product) {
            work.insert(work.end(), f->kids.begin(), f->kids.end());
            continue;
        }
        if (f->kind == Kind::Number) {
            coeff *= f->value;
            continue;
        }
        auto [base, e] = power_split(f);
        // sign-normalize sum factors so the leading term has a positive
        // coefficient; keeps e.g. -(w*(1 - x)) and w*(-1 + x) canonical
        if (base->kind == Kind::Sum && is_integer(e) &&
            coeff_split(base->kids[0]).first < 0) {
            base = negate_sum_terms(base);
            if (numerator(e) % 2 != 0) coeff = -coeff;
        }
        exps[base] += e;
    }
    if (coeff == 0) return zero_expr();
    std::vector<ExprPtr> out;
    for (const auto& [base, e] : exps) {
        ExprPtr p = make_power(base, e);
        if (p->kind == Kind::Number) {
            coeff *= p->value;
        } else if (p->kind == Kind::Product) {
            // power collapsed into a product (e.g. distributed integer power)
            auto [c2, key] = coeff_split(p);
            coeff *= c2;
            if (key) out.push_back(key);
        } else {
            out.push_back(p);
        }
    }
    // a collapsed power may itself be a product; flatten once more
    std::vector<ExprPtr> flat;
    for (auto& f : out) {
        if (f->kind == Kind::Product)
            flat.insert(flat.end(), f->kids.begin(), f->kids.end());
        else
            flat.push_back(f);
    }
    std::sort(flat.begin(), flat.end(), ExprLess{});
    if (flat.empty()) return make_number(coeff);
    if (coeff == 1 && flat.size() == 1) return flat[0];
    if (flat.size() == 1 && flat[0]->kind == Kind::Sum) {
        // coefficient times a lone sum: distribute
        std::vector<ExprPtr> terms;
        for (const auto& k : flat[0]->kids) terms.push_back(make_product({make_number(coeff), k}));
        return make_sum(std::move(terms));
    }
    std::vector<ExprPtr> kids;
    if (coeff != 1) kids.push_back(make_number(coeff));
    kids.insert(kids.end(), flat.begin(), flat.end());
    if (kids.size() == 1) return kids[0];
    return std::make_shared<Expr>(Kind::Product, Rational(0), "", Func::Sin, std::move(kids));
}

inline ExprPtr make_power(ExprPtr base, Rational exp) {
    if (exp == 0) return one_expr();
    if (exp == 1) return base;
    if (base->kind == Kind::Number) {
        if (base->value == 0 && exp < 0)
            throw std::domain_error("pow: zero base with negative exponent");
        if (auto q = try_exact_rational_pow(base->value, exp)) return make_number(*q);
        // fall through: keep symbolic, e.g. 2^(1/2)
    }
    if (base->kind == Kind::Product && is_integer(exp)) {
        std::vector<ExprPtr> fs;
        for (const auto& k : base->kids) fs.push_back(make_power(k, exp));
        return make_product(std::move(fs));
    }
    if (base->kind == Kind::Power) {
        // merge (x^a)^b -> x^(ab) when sign-safe
        const Rational& a = base->value;
        bool safe = is_integer(exp) || numerator(a) % 2 != 0;
        if (safe) return make_power(base->kids[0], a * exp);
    }
    if (base->kind == Kind::Call && base->fn == Func::Exp) {
        // (e^x)^q -> e^(qx)
        return make_call(Func::Exp, make_product({make_number(exp), base->kids[0]}));
    }
    if (base->kind == Kind::Sum && is_integer(exp) &&
        coeff_split(base->kids[0]).first < 0) {
        ExprPtr flipped = make_power(negate_sum_terms(base), exp);
        return numerator(exp) % 2 != 0 ? make_neg(flipped) : flipped;
    }
    return std::make_shared<Expr>(Kind::Power, std::move(exp), "", Func::Sin,
                                  std::vector<ExprPtr>{std::move(base)});
}

inline ExprPtr make_call(Func f, ExprPtr arg) {
    if (f == Func::Sqrt) return make_power(std::move(arg), Rational(1, 2));
    if (arg->kind == Kind::Number) {
        const Rational& q = arg->value;
        if (q == 0) {
            switch (f) {
                case Func::Sin: case Func::Tan: case Func::Sinh: return zero_expr();
                case Func::Cos: case Func::Cosh: case Func::Exp: return one_expr();
                case Func::Log: throw std::domain_error("log(0)");
                default: break;
            }
        }
        if (q == 1 && f == Func::Log) return zero_expr();
    }
    if (f == Func::Exp && arg->kind == Kind::Call && arg->fn == Func::Log) return arg->kids[0];
    if (f == Func::Log && arg->kind == Kind::Call && arg->fn == Func::Exp) return arg->kids[0];
    return std::make_shared<Expr>(Kind::Call, Rational(0), "", f,
                                  std::vector<ExprPtr>{std::move(arg)});
}

// ---- convenience -----------------------------------------------------------

inline ExprPtr operator+(const ExprPtr& a, const ExprPtr& b) { return make_sum({a, b}); }
inline ExprPtr operator-(const ExprPtr& a, const ExprPtr& b) { return make_sub(a, b); }
inline ExprPtr operator*(const ExprPtr& a, const ExprPtr& b) { return make_product({a, b}); }
inline ExprPtr operator/(const ExprPtr& a, const ExprPtr& b) { return make_div(a, b); }
inline ExprPtr operator-(const ExprPtr& a) { return make_neg(a); }

inline ExprPtr num(long n) { return make_number(Rational(n)); }
inline ExprPtr num(long p, long q) { return make_number(Rational(p, q)); }
inline ExprPtr sym(const std::string& s) { return make_symbol(s); }
inline ExprPtr pow(const ExprPtr& b, long e) { return make_power(b, Rational(e)); }
inline ExprPtr pow(const ExprPtr& b, const Rational& e) { return make_power(b, e); }
inline ExprPtr sqrt_(const ExprPtr& e) { return make_power(e, Rational(1, 2)); }
inline ExprPtr sin_(const ExprPtr& e) { return make_call(Func::Sin, e); }
inline ExprPtr cos_(const ExprPtr& e) { return make_call(Func::Cos, e); }
inline ExprPtr exp_(const ExprPtr& e) { return make_call(Func::Exp, e); }
inline ExprPtr log_(const ExprPtr& e) { return make_call(Func::Log, e); }

} // namespace axired
