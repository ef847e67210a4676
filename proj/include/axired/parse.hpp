#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "axired/expr.hpp"

namespace axired {

struct ParseError : std::runtime_error {
    size_t offset;
    std::vector<std::string> expected;
    ParseError(std::string msg, size_t off, std::vector<std::string> exp)
        : std::runtime_error(std::move(msg) + " at byte " + std::to_string(off)),
          offset(off),
          expected(std::move(exp)) {}
};

struct UnknownFunctionError : std::runtime_error {
    explicit UnknownFunctionError(const std::string& name, size_t off)
        : std::runtime_error("unknown function '" + name + "' at byte " + std::to_string(off)) {}
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_, {"end of input", "+", "-", "*", "/", "^"});
        return e;
    }

private:
    std::string_view src_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr expr() {
        std::vector<ExprPtr> terms;
        bool neg = false;
        if (eat('-')) neg = true;
        else eat('+');
        ExprPtr t = term();
        terms.push_back(neg ? make_neg(t) : t);
        for (;;) {
            if (eat('+')) terms.push_back(term());
            else if (eat('-')) terms.push_back(make_neg(term()));
            else break;
        }
        return make_sum(std::move(terms));
    }

    ExprPtr term() {
        std::vector<ExprPtr> factors{factor()};
        for (;;) {
            if (eat('*')) factors.push_back(factor());
            else if (eat('/')) factors.push_back(make_power(factor(), -1));
            else break;
        }
        return make_product(std::move(factors));
    }

    ExprPtr factor() {
        ExprPtr b = base();
        if (eat('^')) return make_power(std::move(b), exponent());
        return b;
    }

    // exponent := ('-')? number ('/' number)? | '(' exponent ')'
    Rational exponent() {
        skip_ws();
        if (eat('(')) {
            Rational q = exponent();
            if (!eat(')')) throw ParseError("expected ')' in exponent", pos_, {")"});
            return q;
        }
        bool neg = eat('-');
        Rational q = number();
        // only treat '/' as part of the exponent when a digit follows;
        // otherwise it is division and belongs to term()
        size_t save = pos_;
        if (eat('/')) {
            skip_ws();
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                q /= number();
            else
                pos_ = save;
        }
        return neg ? -q : q;
    }

    ExprPtr base() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError("unexpected end of input", pos_, {"number", "symbol", "("});
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_, {")"});
            return e;
        }
        if (c == '-') {  // unary minus on a factor, e.g. 2*-x is rejected but (-x) works via expr
            throw ParseError("unexpected '-'", pos_, {"number", "symbol", "("});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return make_number(number());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            std::string name(src_.substr(start, pos_ - start));
            if (peek() == '(') {
                Func f;
                if (name == "sin") f = Func::Sin;
                else if (name == "cos") f = Func::Cos;
                else if (name == "tan") f = Func::Tan;
                else if (name == "exp") f = Func::Exp;
                else if (name == "log") f = Func::Log;
                else if (name == "sqrt") f = Func::Sqrt;
                else if (name == "sinh") f = Func::Sinh;
                else if (name == "cosh") f = Func::Cosh;
                else throw UnknownFunctionError(name, start);
                eat('(');
                ExprPtr arg = expr();
                if (!eat(')')) throw ParseError("expected ')'", pos_, {")"});
                return make_call(f, std::move(arg));
            }
            return make_symbol(std::move(name));
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_,
                         {"number", "symbol", "("});
    }

    // number := digits ('.' digits)? | digits '/' digits (rational); the '/'
    // form is only consumed when the slash is immediately followed by a digit
    // and we are inside an exponent -- elsewhere '/' is division and handled
    // by term(). A plain decimal is converted to an exact rational.
    Rational number() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        BigInt intpart = 0;
        if (pos_ > start) intpart = BigInt(std::string(src_.substr(start, pos_ - start)));
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            size_t fs = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ == fs && pos_ == start + 1)
                throw ParseError("malformed number", start, {"digit"});
            std::string frac(src_.substr(fs, pos_ - fs));
            BigInt den = 1;
            BigInt fnum = 0;
            if (!frac.empty()) {
                fnum = BigInt(frac);
                for (size_t i = 0; i < frac.size(); ++i) den *= 10;
            }
            return Rational(intpart) + Rational(fnum, den);
        }
        if (pos_ == start) throw ParseError("expected number", pos_, {"digit"});
        return Rational(intpart);
    }
};

} // namespace detail

/// Parse DSL source text into a canonical Expr.
inline ExprPtr parse(std::string_view src) { return detail::Parser(src).parse(); }

} // namespace axired
