#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "axired/expr.hpp"
#include "axired/print.hpp"

namespace axired {

/// Symbol name -> real value.
using Binding = std::map<std::string, double>;

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnboundSymbolError : EvalError {
    explicit UnboundSymbolError(const std::string& s) : EvalError("unbound symbol: " + s) {}
};

namespace detail {

inline double eval_pow(double base, const Rational& exp) {
    double e = to_double(exp);
    if (base == 0.0) {
        if (exp < 0) throw EvalError("0 raised to negative power");
        return 0.0;
    }
    if (base < 0.0) {
        if (is_integer(exp)) {
            double r = std::pow(-base, e);
            return numerator(exp) % 2 == 0 ? r : -r;
        }
        if (denominator(exp) % 2 != 0) {  // odd root keeps the sign
            double r = std::pow(-base, e);
            return numerator(exp) % 2 == 0 ? r : -r;
        }
        throw EvalError("even root of negative value");
    }
    return std::pow(base, e);
}

inline double eval_rec(const ExprPtr& e, const Binding& b,
                       std::unordered_map<const Expr*, double>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    double r = 0;
    switch (e->kind) {
        case Kind::Number:
            r = to_double(e->value);
            break;
        case Kind::Symbol: {
            auto s = b.find(e->name);
            if (s == b.end()) throw UnboundSymbolError(e->name);
            r = s->second;
            break;
        }
        case Kind::Call: {
            double a = eval_rec(e->kids[0], b, memo);
            switch (e->fn) {
                case Func::Sin: r = std::sin(a); break;
                case Func::Cos: r = std::cos(a); break;
                case Func::Tan: r = std::tan(a); break;
                case Func::Exp: r = std::exp(a); break;
                case Func::Log:
                    if (a <= 0) throw EvalError("log of non-positive value");
                    r = std::log(a);
                    break;
                case Func::Sqrt:
                    if (a < 0) throw EvalError("sqrt of negative value");
                    r = std::sqrt(a);
                    break;
                case Func::Sinh: r = std::sinh(a); break;
                case Func::Cosh: r = std::cosh(a); break;
            }
            break;
        }
        case Kind::Sum:
            for (const auto& k : e->kids) r += eval_rec(k, b, memo);
            break;
        case Kind::Product:
            r = 1;
            for (const auto& k : e->kids) r *= eval_rec(k, b, memo);
            break;
        case Kind::Power:
            r = eval_pow(eval_rec(e->kids[0], b, memo), e->value);
            break;
    }
    if (!std::isfinite(r)) throw EvalError("non-finite result in " + to_string(e));
    memo[e.get()] = r;
    return r;
}

} // namespace detail

inline double evaluate(const ExprPtr& e, const Binding& b) {
    std::unordered_map<const Expr*, double> memo;
    return detail::eval_rec(e, b, memo);
}

/// Evaluation context reusing one memo table across expressions that share
/// subtrees (tensor components built from common Christoffel symbols etc.).
class Evaluator {
public:
    explicit Evaluator(Binding b) : binding_(std::move(b)) {}
    double operator()(const ExprPtr& e) { return detail::eval_rec(e, binding_, memo_); }
    const Binding& binding() const { return binding_; }

private:
    Binding binding_;
    std::unordered_map<const Expr*, double> memo_;
};

} // namespace axired
