// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "matconvex/errors.hpp"
#include "matconvex/expr.hpp"

namespace matconvex {

namespace detail {

// Recursive-descent parser for the function grammar:
//
//   spec     := expr [ "on" interval ]
//   interval := ("(" | "[") bound "," bound (")" | "]")
//   expr     := term (("+" | "-") term)*
//   term     := unary (("*" | "/") unary)*
//   unary    := ("-" | "+") unary | postfix
//   postfix  := primary [ "^" exponent ]
//   primary  := number | "x" | "(" expr ")" | fn "(" expr ")"
//             | "pow" "(" expr "," signed ")" | "poly" "[" signed ("," signed)* "]"
//   fn       := "exp" | "log" | "neg" | "recip"
class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    FunctionSpec parse_spec() {
        skip_ws();
        const std::size_t begin = pos_;
        ExprPtr e = parse_expr();
        std::size_t end = pos_;
        while (end > begin && std::isspace(static_cast<unsigned char>(s_[end - 1]))) --end;
        Interval domain = Interval::whole_line();
        skip_ws();
        if (peek_word("on")) {
            pos_ += 2;
            domain = parse_interval();
        }
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        // The label keeps the user's spelling of the expression, without the domain.
        return FunctionSpec(std::move(e), domain, std::string(s_.substr(begin, end - begin)));
    }

    ExprPtr parse_expression_only() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

    Interval parse_interval_only() {
        Interval iv = parse_interval();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return iv;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool peek_word(std::string_view w) {
        skip_ws();
        if (s_.substr(pos_, w.size()) != w) return false;
        const std::size_t end = pos_ + w.size();
        return end >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[end]));
    }

    bool at_number() {
        skip_ws();
        if (pos_ >= s_.size()) return false;
        const char c = s_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    double parse_unsigned_number() {
        skip_ws();
        std::size_t end = pos_;
        while (end < s_.size()) {
            const char c = s_[end];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                ++end;
            } else if ((c == 'e' || c == 'E') && end > pos_) {
                ++end;
                if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
            } else {
                break;
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + end, v);
        if (ec != std::errc() || ptr != s_.data() + end) fail("malformed number");
        pos_ = end;
        return v;
    }

    double parse_signed_number(bool allow_inf = false) {
        double sign = 1.0;
        if (accept('-'))
            sign = -1.0;
        else
            accept('+');
        if (allow_inf && peek_word("inf")) {
            pos_ += 3;
            return sign * kInf;
        }
        if (!at_number()) fail("expected a number");
        return sign * parse_unsigned_number();
    }

    Interval parse_interval() {
        bool lo_open = true;
        if (accept('['))
            lo_open = false;
        else if (!accept('('))
            fail("expected '(' or '[' to open the interval");
        const std::size_t lo_pos = pos_;
        const double lo = parse_signed_number(true);
        expect(',');
        const double hi = parse_signed_number(true);
        bool hi_open = true;
        if (accept(']'))
            hi_open = false;
        else if (!accept(')'))
            fail("expected ')' or ']' to close the interval");
        if (!(lo < hi)) throw ParseError("interval requires lo < hi", lo_pos);
        if ((!lo_open && std::isinf(lo)) || (!hi_open && std::isinf(hi)))
            throw ParseError("infinite endpoints must be open", lo_pos);
        return Interval(lo, hi, lo_open, hi_open);
    }

    ExprPtr parse_expr() {
        std::vector<ExprPtr> terms;
        terms.push_back(parse_term());
        while (true) {
            if (accept('+'))
                terms.push_back(parse_term());
            else if (accept('-'))
                terms.push_back(expr::negate(parse_term()));
            else
                break;
        }
        return expr::sum(std::move(terms));
    }

    ExprPtr parse_term() {
        std::vector<ExprPtr> factors;
        factors.push_back(parse_unary());
        while (true) {
            if (accept('*'))
                factors.push_back(parse_unary());
            else if (accept('/'))
                factors.push_back(expr::reciprocal(parse_unary()));
            else
                break;
        }
        return expr::product(std::move(factors));
    }

    ExprPtr parse_unary() {
        if (accept('-')) {
            ExprPtr operand = parse_unary();
            if (operand->op == Op::Constant) return expr::constant(-operand->value);
            return expr::negate(std::move(operand));
        }
        if (accept('+')) return parse_unary();
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr base = parse_primary();
        if (accept('^')) {
            double p = 0.0;
            if (accept('(')) {
                p = parse_signed_number();
                expect(')');
            } else {
                p = parse_signed_number();
            }
            return expr::power(std::move(base), p);
        }
        return base;
    }

    ExprPtr parse_call_argument() {
        expect('(');
        ExprPtr e = parse_expr();
        expect(')');
        return e;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (at_number()) return expr::constant(parse_unsigned_number());
        if (accept('(')) {
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (peek_word("x")) {
            pos_ += 1;
            return expr::variable();
        }
        if (peek_word("exp")) {
            pos_ += 3;
            return expr::exp(parse_call_argument());
        }
        if (peek_word("log")) {
            pos_ += 3;
            return expr::log(parse_call_argument());
        }
        if (peek_word("neg")) {
            pos_ += 3;
            return expr::negate(parse_call_argument());
        }
        if (peek_word("recip")) {
            pos_ += 5;
            return expr::reciprocal(parse_call_argument());
        }
        if (peek_word("pow")) {
            pos_ += 3;
            expect('(');
            ExprPtr base = parse_expr();
            expect(',');
            const double p = parse_signed_number();
            expect(')');
            return expr::power(std::move(base), p);
        }
        if (peek_word("poly")) {
            pos_ += 4;
            expect('[');
            std::vector<double> coeffs{parse_signed_number()};
            while (accept(',')) coeffs.push_back(parse_signed_number());
            expect(']');
            return expr::polynomial(std::move(coeffs));
        }
        fail("expected an expression");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses "expr [on interval]". Without a domain suffix the function is
/// defined on the whole real line.
inline FunctionSpec parse(std::string_view text) { return detail::Parser(text).parse_spec(); }

inline ExprPtr parse_expression(std::string_view text) { return detail::Parser(text).parse_expression_only(); }

/// Parses "(a,b)", "[a,b)", ... with inf / -inf allowed at open ends.
inline Interval parse_interval(std::string_view text) { return detail::Parser(text).parse_interval_only(); }

}  // namespace matconvex
