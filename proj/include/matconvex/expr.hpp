// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matconvex/errors.hpp"
#include "matconvex/interval.hpp"

namespace matconvex {

enum class Op { Constant, Variable, Sum, Product, Negate, Reciprocal, Power, Exp, Log, Polynomial };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable node of a scalar expression in the single variable x.
///
/// `value` holds the constant for Constant nodes and the exponent for Power
/// nodes; `coeffs` holds c_0..c_d for Polynomial nodes (a polynomial in x).
struct Expr {
    Op op = Op::Constant;
    double value = 0.0;
    std::vector<double> coeffs;
    std::vector<ExprPtr> children;
};

namespace expr {

inline ExprPtr constant(double c) { return std::make_shared<const Expr>(Expr{Op::Constant, c, {}, {}}); }
inline ExprPtr variable() { return std::make_shared<const Expr>(Expr{Op::Variable, 0.0, {}, {}}); }

inline ExprPtr sum(std::vector<ExprPtr> terms) {
    if (terms.empty()) return constant(0.0);
    if (terms.size() == 1) return terms.front();
    return std::make_shared<const Expr>(Expr{Op::Sum, 0.0, {}, std::move(terms)});
}

inline ExprPtr product(std::vector<ExprPtr> factors) {
    if (factors.empty()) return constant(1.0);
    if (factors.size() == 1) return factors.front();
    return std::make_shared<const Expr>(Expr{Op::Product, 0.0, {}, std::move(factors)});
}

inline ExprPtr negate(ExprPtr child) { return std::make_shared<const Expr>(Expr{Op::Negate, 0.0, {}, {std::move(child)}}); }
inline ExprPtr reciprocal(ExprPtr child) {
    return std::make_shared<const Expr>(Expr{Op::Reciprocal, 0.0, {}, {std::move(child)}});
}
inline ExprPtr power(ExprPtr child, double p) {
    if (!std::isfinite(p)) throw PreconditionError("exponent must be finite");
    return std::make_shared<const Expr>(Expr{Op::Power, p, {}, {std::move(child)}});
}
inline ExprPtr exp(ExprPtr child) { return std::make_shared<const Expr>(Expr{Op::Exp, 0.0, {}, {std::move(child)}}); }
inline ExprPtr log(ExprPtr child) { return std::make_shared<const Expr>(Expr{Op::Log, 0.0, {}, {std::move(child)}}); }
inline ExprPtr polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    for (double c : coeffs)
        if (!std::isfinite(c)) throw PreconditionError("polynomial coefficients must be finite");
    return std::make_shared<const Expr>(Expr{Op::Polynomial, 0.0, std::move(coeffs), {}});
}

inline ExprPtr difference(ExprPtr a, ExprPtr b) { return sum({std::move(a), negate(std::move(b))}); }
inline ExprPtr quotient(ExprPtr a, ExprPtr b) { return product({std::move(a), reciprocal(std::move(b))}); }

}  // namespace expr

inline bool equal(const Expr& a, const Expr& b) {
    if (a.op != b.op || a.value != b.value || a.coeffs != b.coeffs || a.children.size() != b.children.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!equal(*a.children[i], *b.children[i])) return false;
    return true;
}

inline bool is_integer(double p) { return std::isfinite(p) && p == std::floor(p) && std::fabs(p) < 1e9; }

/// Pointwise evaluation in arithmetic type T (double, or long double for
/// reference computations).
template <class T>
T evaluate_expr(const Expr& e, T t) {
    using std::exp, std::log, std::pow;
    T out{};
    switch (e.op) {
        case Op::Constant: out = static_cast<T>(e.value); break;
        case Op::Variable: out = t; break;
        case Op::Sum:
            for (const auto& c : e.children) out += evaluate_expr(*c, t);
            break;
        case Op::Product:
            out = T(1);
            for (const auto& c : e.children) out *= evaluate_expr(*c, t);
            break;
        case Op::Negate: out = -evaluate_expr(*e.children[0], t); break;
        case Op::Reciprocal: {
            const T u = evaluate_expr(*e.children[0], t);
            if (u == T(0)) throw DomainError("reciprocal of zero", static_cast<double>(t));
            out = T(1) / u;
            break;
        }
        case Op::Power: {
            const T u = evaluate_expr(*e.children[0], t);
            const double p = e.value;
            if (is_integer(p)) {
                if (u == T(0) && p < 0) throw DomainError("negative power of zero", static_cast<double>(t));
            } else if (u <= T(0)) {
                throw DomainError("fractional power of a nonpositive value", static_cast<double>(t));
            }
            out = pow(u, static_cast<T>(p));
            break;
        }
        case Op::Exp: out = exp(evaluate_expr(*e.children[0], t)); break;
        case Op::Log: {
            const T u = evaluate_expr(*e.children[0], t);
            if (u <= T(0)) throw DomainError("log of a nonpositive value", static_cast<double>(t));
            out = log(u);
            break;
        }
        case Op::Polynomial:
            for (auto it = e.coeffs.rbegin(); it != e.coeffs.rend(); ++it) out = out * t + static_cast<T>(*it);
            break;
    }
    if (!std::isfinite(static_cast<long double>(out)))
        throw DomainError("non-finite intermediate value", static_cast<double>(t));
    return out;
}

/// Shortest decimal text that reads back to exactly the same double.
inline std::string format_number(double v) {
    if (v == kInf) return "inf";
    if (v == -kInf) return "-inf";
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string to_string(const Expr& e) {
    auto join = [&](const char* sep) {
        std::string s = "(";
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i) s += sep;
            s += to_string(*e.children[i]);
        }
        return s + ")";
    };
    switch (e.op) {
        case Op::Constant: return format_number(e.value);
        case Op::Variable: return "x";
        case Op::Sum: return join(" + ");
        case Op::Product: return join(" * ");
        case Op::Negate: return "neg(" + to_string(*e.children[0]) + ")";
        case Op::Reciprocal: return "recip(" + to_string(*e.children[0]) + ")";
        case Op::Power: return "pow(" + to_string(*e.children[0]) + ", " + format_number(e.value) + ")";
        case Op::Exp: return "exp(" + to_string(*e.children[0]) + ")";
        case Op::Log: return "log(" + to_string(*e.children[0]) + ")";
        case Op::Polynomial: {
            std::string s = "poly[";
            for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
                if (i) s += ", ";
                s += format_number(e.coeffs[i]);
            }
            return s + "]";
        }
    }
    return {};
}

inline std::string to_string(const Interval& iv) {
    return std::string(iv.lo_open() ? "(" : "[") + format_number(iv.lo()) + ", " + format_number(iv.hi()) +
           (iv.hi_open() ? ")" : "]");
}

/// A scalar function together with its interval of definition.
struct FunctionSpec {
    ExprPtr expr;
    Interval domain;
    std::string label;  // expression text, without the domain

    FunctionSpec() : expr(expr::variable()) {}
    FunctionSpec(ExprPtr e, Interval d, std::string l = {})
        : expr(std::move(e)), domain(d), label(std::move(l)) {
        if (label.empty()) label = to_string(*expr);
    }

    std::string text() const { return to_string(*expr) + " on " + to_string(domain); }

    FunctionSpec with_domain(const Interval& d) const { return FunctionSpec(expr, d, label); }
};

/// Value of f at t. Points outside the domain raise DomainError.
inline double evaluate(const FunctionSpec& f, double t) {
    if (!f.domain.contains(t)) throw DomainError("point outside the domain of " + f.label, t);
    return evaluate_expr<double>(*f.expr, t);
}

struct DomainReport {
    bool ok = true;
    std::optional<double> failing_point;
    std::string message;
};

/// Probes evaluability on an interior grid of `probes` points.
inline DomainReport domain_check(const FunctionSpec& f, int probes = 64) {
    if (probes < 64) probes = 64;
    for (double t : interior_grid(f.domain, probes)) {
        try {
            evaluate_expr<double>(*f.expr, t);
        } catch (const DomainError& err) {
            return DomainReport{false, t, err.what()};
        }
    }
    return {};
}

}  // namespace matconvex
