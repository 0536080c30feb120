// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "matconvex/errors.hpp"
#include "matconvex/expr.hpp"

namespace matconvex {

inline constexpr int kMaxJetOrder = 64;

/// Truncated Taylor expansion at `base`: coeffs[k] = f^(k)(base) / k!.
///
/// Coefficients are kept normalized throughout, so Hankel matrices built
/// from derivatives read them off directly and factorials never appear.
struct Jet {
    double base = 0.0;
    std::vector<double> coeffs;

    int order() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    double operator[](int k) const { return k < static_cast<int>(coeffs.size()) ? coeffs[k] : 0.0; }
};

inline double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

namespace jet {

inline Jet constant(double t0, double c, int order) {
    Jet j{t0, std::vector<double>(order + 1, 0.0)};
    j.coeffs[0] = c;
    return j;
}

inline Jet variable(double t0, int order) {
    Jet j = constant(t0, t0, order);
    if (order >= 1) j.coeffs[1] = 1.0;
    return j;
}

inline Jet add(Jet a, const Jet& b) {
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) a.coeffs[k] += b.coeffs[k];
    return a;
}

inline Jet scale(Jet a, double s) {
    for (double& c : a.coeffs) c *= s;
    return a;
}

inline Jet negate(Jet a) { return scale(std::move(a), -1.0); }

/// Cauchy product truncated at the common order.
inline Jet mul(const Jet& a, const Jet& b) {
    const int K = a.order();
    Jet out{a.base, std::vector<double>(K + 1, 0.0)};
    for (int k = 0; k <= K; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.coeffs[j] * b.coeffs[k - j];
        out.coeffs[k] = s;
    }
    return out;
}

inline Jet reciprocal(const Jet& u) {
    const double u0 = u.coeffs[0];
    if (u0 == 0.0) throw DomainError("reciprocal of zero", u.base);
    const int K = u.order();
    Jet r{u.base, std::vector<double>(K + 1, 0.0)};
    r.coeffs[0] = 1.0 / u0;
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += u.coeffs[j] * r.coeffs[k - j];
        r.coeffs[k] = -s / u0;
    }
    return r;
}

inline Jet power_nonneg_int(Jet u, long long p) {
    Jet result = constant(u.base, 1.0, u.order());
    while (p > 0) {
        if (p & 1) result = mul(result, u);
        p >>= 1;
        if (p) u = mul(u, u);
    }
    return result;
}

/// u^p. Nonnegative integer exponents use repeated products so polynomial
/// jets stay exact; other exponents use the recurrence from u w' = p u' w.
inline Jet power(const Jet& u, double p) {
    const double u0 = u.coeffs[0];
    if (is_integer(p)) {
        if (p >= 0) return power_nonneg_int(u, static_cast<long long>(p));
        if (u0 == 0.0) throw DomainError("negative power of zero", u.base);
        if (u0 < 0.0) return reciprocal(power_nonneg_int(u, static_cast<long long>(-p)));
    } else if (u0 <= 0.0) {
        throw DomainError("fractional power of a nonpositive value", u.base);
    }
    const int K = u.order();
    Jet w{u.base, std::vector<double>(K + 1, 0.0)};
    w.coeffs[0] = std::pow(u0, p);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * u.coeffs[j] * w.coeffs[k - j];
        w.coeffs[k] = s / (k * u0);
    }
    return w;
}

inline Jet exp(const Jet& u) {
    const int K = u.order();
    Jet e{u.base, std::vector<double>(K + 1, 0.0)};
    e.coeffs[0] = std::exp(u.coeffs[0]);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * u.coeffs[j] * e.coeffs[k - j];
        e.coeffs[k] = s / k;
    }
    return e;
}

inline Jet log(const Jet& u) {
    const double u0 = u.coeffs[0];
    if (u0 <= 0.0) throw DomainError("log of a nonpositive value", u.base);
    const int K = u.order();
    Jet l{u.base, std::vector<double>(K + 1, 0.0)};
    l.coeffs[0] = std::log(u0);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j < k; ++j) s += j * l.coeffs[j] * u.coeffs[k - j];
        l.coeffs[k] = (u.coeffs[k] - s / k) / u0;
    }
    return l;
}

/// Jet of f' from the jet of f; the order drops by one.
inline Jet derivative(const Jet& f) {
    const int K = f.order();
    if (K < 1) return Jet{f.base, {0.0}};
    Jet d{f.base, std::vector<double>(K, 0.0)};
    for (int k = 0; k < K; ++k) d.coeffs[k] = (k + 1) * f.coeffs[k + 1];
    return d;
}

}  // namespace jet

namespace detail {

inline Jet lift(const Expr& e, double t0, int K) {
    switch (e.op) {
        case Op::Constant: return jet::constant(t0, e.value, K);
        case Op::Variable: return jet::variable(t0, K);
        case Op::Sum: {
            Jet acc = lift(*e.children[0], t0, K);
            for (std::size_t i = 1; i < e.children.size(); ++i) acc = jet::add(std::move(acc), lift(*e.children[i], t0, K));
            return acc;
        }
        case Op::Product: {
            Jet acc = lift(*e.children[0], t0, K);
            for (std::size_t i = 1; i < e.children.size(); ++i) acc = jet::mul(acc, lift(*e.children[i], t0, K));
            return acc;
        }
        case Op::Negate: return jet::negate(lift(*e.children[0], t0, K));
        case Op::Reciprocal: return jet::reciprocal(lift(*e.children[0], t0, K));
        case Op::Power: return jet::power(lift(*e.children[0], t0, K), e.value);
        case Op::Exp: return jet::exp(lift(*e.children[0], t0, K));
        case Op::Log: return jet::log(lift(*e.children[0], t0, K));
        case Op::Polynomial: {
            const Jet x = jet::variable(t0, K);
            Jet acc = jet::constant(t0, 0.0, K);
            for (auto it = e.coeffs.rbegin(); it != e.coeffs.rend(); ++it) {
                acc = jet::mul(acc, x);
                acc.coeffs[0] += *it;
            }
            return acc;
        }
    }
    throw Error("unknown expression node");
}

}  // namespace detail

/// Normalized Taylor coefficients f^(k)(t0)/k!, k = 0..K.
inline Jet jet_lift(const FunctionSpec& f, double t0, int K) {
    if (K < 0 || K > kMaxJetOrder) throw OrderCapError("jet order must lie in [0, 64]");
    if (!f.domain.contains(t0)) throw DomainError("expansion point outside the domain of " + f.label, t0);
    Jet j = detail::lift(*f.expr, t0, K);
    for (double c : j.coeffs)
        if (!std::isfinite(c)) throw DomainError("non-finite Taylor coefficient", t0);
    return j;
}

/// f^(k)(t).
inline double derivative(const FunctionSpec& f, double t, int k) {
    return factorial(k) * jet_lift(f, t, k).coeffs[k];
}

/// Jet of an antiderivative g with g(t0) = 0, so that g' = f termwise.
inline Jet antiderivative_jet(const Jet& j) {
    if (j.order() + 1 > kMaxJetOrder) throw OrderCapError("antiderivative would exceed the jet order cap");
    Jet g{j.base, std::vector<double>(j.coeffs.size() + 1, 0.0)};
    for (std::size_t k = 0; k < j.coeffs.size(); ++k) g.coeffs[k + 1] = j.coeffs[k] / static_cast<double>(k + 1);
    return g;
}

/// Central-difference estimate of f^(k)(t) with one Richardson step
/// (steps h and h/2). Evaluates in quad precision; the truncation error is
/// O(h^4) after extrapolation, the rounding error O(eps |f| / h^k).
inline double finite_difference_oracle(const FunctionSpec& f, double t, int k, double h) {
    if (k < 0 || k > 6) throw PreconditionError("finite-difference oracle supports orders 0..6");
    if (!(h > 0.0)) throw PreconditionError("step must be positive");
    const double reach = 0.5 * k * h + h;
    if (!f.domain.interior_contains(t - reach) || !f.domain.interior_contains(t + reach))
        throw DomainError("finite-difference stencil leaves the domain", t);
    // Quad precision keeps stencil cancellation out of the error budget.
    using Quad = boost::multiprecision::cpp_bin_float_quad;
    auto central = [&](const Quad& step) {
        Quad acc = 0;
        Quad binom = 1;
        for (int i = 0; i <= k; ++i) {
            const Quad x = Quad(t) + (Quad(k) / 2 - i) * step;
            acc += ((i % 2) ? -binom : binom) * evaluate_expr<Quad>(*f.expr, x);
            binom = binom * (k - i) / (i + 1);
        }
        return Quad(acc / pow(step, k));
    };
    const Quad coarse = central(Quad(h));
    const Quad fine = central(Quad(h) / 2);
    return static_cast<double>((4 * fine - coarse) / 3);
}

/// Step for finite_difference_oracle at order k near t. `scale` is the
/// distance from t to the nearest singularity (or 1 if farther); the step
/// balances the O(h^4) truncation error against quad rounding.
inline double default_fd_step(int k, double scale) {
    return 0.5 * std::max(std::min(scale, 1.0), 1e-6) * std::pow(1e-28, 1.0 / (k + 4));
}

}  // namespace matconvex
