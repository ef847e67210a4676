#pragma once

#include <string>
#include <unordered_map>

#include "axired/expr.hpp"

namespace axired {

namespace detail {

inline ExprPtr diff_rec(const ExprPtr& e, const std::string& v,
                        std::unordered_map<const Expr*, ExprPtr>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprPtr r;
    switch (e->kind) {
        case Kind::Number:
            r = zero_expr();
            break;
        case Kind::Symbol:
            r = (e->name == v) ? one_expr() : zero_expr();
            break;
        case Kind::Call: {
            const ExprPtr& a = e->kids[0];
            ExprPtr da = diff_rec(a, v, memo);
            if (is_zero_literal(da)) {
                r = zero_expr();
                break;
            }
            ExprPtr outer;
            switch (e->fn) {
                case Func::Sin: outer = make_call(Func::Cos, a); break;
                case Func::Cos: outer = make_neg(make_call(Func::Sin, a)); break;
                case Func::Tan:
                    outer = make_sum({one_expr(), make_power(make_call(Func::Tan, a), 2)});
                    break;
                case Func::Exp: outer = e; break;
                case Func::Log: outer = make_power(a, -1); break;
                case Func::Sqrt: outer = make_product({make_number(Rational(1, 2)), make_power(a, Rational(-1, 2))}); break;
                case Func::Sinh: outer = make_call(Func::Cosh, a); break;
                case Func::Cosh: outer = make_call(Func::Sinh, a); break;
            }
            r = make_product({outer, da});
            break;
        }
        case Kind::Sum: {
            std::vector<ExprPtr> terms;
            for (const auto& k : e->kids) terms.push_back(diff_rec(k, v, memo));
            r = make_sum(std::move(terms));
            break;
        }
        case Kind::Product: {
            std::vector<ExprPtr> terms;
            for (size_t i = 0; i < e->kids.size(); ++i) {
                ExprPtr di = diff_rec(e->kids[i], v, memo);
                if (is_zero_literal(di)) continue;
                std::vector<ExprPtr> fs{di};
                for (size_t j = 0; j < e->kids.size(); ++j)
                    if (j != i) fs.push_back(e->kids[j]);
                terms.push_back(make_product(std::move(fs)));
            }
            r = make_sum(std::move(terms));
            break;
        }
        case Kind::Power: {
            const ExprPtr& b = e->kids[0];
            ExprPtr db = diff_rec(b, v, memo);
            if (is_zero_literal(db)) {
                r = zero_expr();
                break;
            }
            r = make_product({make_number(e->value), make_power(b, e->value - 1), db});
            break;
        }
    }
    memo[e.get()] = r;
    return r;
}

} // namespace detail

/// d e / d v; every other symbol is treated as a constant.
inline ExprPtr differentiate(const ExprPtr& e, const std::string& v) {
    std::unordered_map<const Expr*, ExprPtr> memo;
    return detail::diff_rec(e, v, memo);
}

} // namespace axired
