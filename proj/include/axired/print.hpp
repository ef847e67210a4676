#pragma once

#include <sstream>
#include <string>

#include "axired/expr.hpp"

namespace axired {

namespace detail {

// precedence: sum 1, product 2, power 3, atom 4
inline void print_rec(std::ostream& os, const ExprPtr& e, int parent_prec);
inline int kind_prec(const ExprPtr& e);

inline void print_paren(std::ostream& os, const ExprPtr& e, int prec, int parent_prec) {
    if (prec < parent_prec) {
        os << '(';
        print_rec(os, e, 0);
        os << ')';
    } else {
        print_rec(os, e, parent_prec);
    }
}

inline void print_rec(std::ostream& os, const ExprPtr& e, int parent_prec) {
    switch (e->kind) {
        case Kind::Number: {
            bool neg = e->value < 0;
            bool frac = !is_integer(e->value);
            if ((neg && parent_prec > 1) || (frac && parent_prec > 2)) {
                os << '(' << rational_str(e->value) << ')';
            } else {
                os << rational_str(e->value);
            }
            break;
        }
        case Kind::Symbol:
            os << e->name;
            break;
        case Kind::Call:
            os << func_name(e->fn) << '(';
            print_rec(os, e->kids[0], 0);
            os << ')';
            break;
        case Kind::Power: {
            print_paren(os, e->kids[0], e->kids[0]->kind == Kind::Call ? 4 : kind_prec(e->kids[0]), 4);
            os << '^';
            const Rational& q = e->value;
            if (is_integer(q) && q > 0)
                os << rational_str(q);
            else
                os << '(' << rational_str(q) << ')';
            break;
        }
        case Kind::Product: {
            bool first = true;
            for (const auto& k : e->kids) {
                if (!first) os << '*';
                print_paren(os, k, kind_prec(k), 3);
                first = false;
            }
            break;
        }
        case Kind::Sum: {
            bool first = true;
            for (const auto& k : e->kids) {
                auto [c, key] = coeff_split(k);
                if (!first) {
                    if (c < 0) {
                        os << " - ";
                        print_rec(os, coeff_join(-c, key), 2);
                    } else {
                        os << " + ";
                        print_rec(os, k, 2);
                    }
                } else {
                    print_rec(os, k, 2);
                }
                first = false;
            }
            break;
        }
    }
}

inline int kind_prec(const ExprPtr& e) {
    switch (e->kind) {
        case Kind::Sum: return 1;
        case Kind::Product: return 2;
        case Kind::Power: return 3;
        default: return 4;
    }
}

} // namespace detail

inline std::string to_string(const ExprPtr& e) {
    std::ostringstream os;
    detail::print_rec(os, e, 0);
    return os.str();
}

} // namespace axired
