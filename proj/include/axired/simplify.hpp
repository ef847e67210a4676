#pragma once

#include <unordered_map>

#include "axired/expr.hpp"

namespace axired {

namespace detail {

inline ExprPtr simplify_rec(const ExprPtr& e, std::unordered_map<const Expr*, ExprPtr>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    ExprPtr r;
    switch (e->kind) {
        case Kind::Number:
        case Kind::Symbol:
            r = e;
            break;
        case Kind::Call:
            r = make_call(e->fn, simplify_rec(e->kids[0], memo));
            break;
        case Kind::Power:
            r = make_power(simplify_rec(e->kids[0], memo), e->value);
            break;
        case Kind::Sum: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(simplify_rec(k, memo));
            r = make_sum(std::move(kids));
            break;
        }
        case Kind::Product: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(simplify_rec(k, memo));
            r = make_product(std::move(kids));
            break;
        }
    }
    memo[e.get()] = r;
    return r;
}

} // namespace detail

/// Rebuild bottom-up through the canonicalizing constructors. The smart
/// constructors already keep everything canonical, so this is idempotent by
/// construction; it exists to re-canonicalize expressions assembled from
/// pieces (and shares rebuilt subtrees through the memo).
inline ExprPtr simplify(const ExprPtr& e) {
    std::unordered_map<const Expr*, ExprPtr> memo;
    return detail::simplify_rec(e, memo);
}

} // namespace axired
