// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "matconvex/calculus.hpp"
#include "matconvex/criteria.hpp"
#include "matconvex/errors.hpp"
#include "matconvex/expr.hpp"

namespace matconvex {

/// Polynomial c_0 + c_1 t + ... + c_d t^d on an interval. T is double for
/// searches, or an exact rational type for hand-entered coefficients.
template <class T>
struct BasicPolynomial {
    std::vector<T> coeffs;
    Interval interval;

    int degree() const {
        for (int k = static_cast<int>(coeffs.size()) - 1; k > 0; --k)
            if (coeffs[k] != T(0)) return k;
        return 0;
    }
};

using Polynomial = BasicPolynomial<double>;

inline FunctionSpec as_function(const Polynomial& p) { return FunctionSpec(expr::polynomial(p.coeffs), p.interval); }

/// f(t), f'(t), ..., f^(k)(t) by repeated synthetic division (Taylor shift
/// to t). Exact whenever T arithmetic is exact.
template <class T>
std::vector<T> poly_eval_derivatives(const BasicPolynomial<T>& p, const T& t, int k) {
    if (k < 0 || k > p.degree() + 2) throw PreconditionError("derivative order must lie in [0, degree + 2]");
    std::vector<T> b = p.coeffs;
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    T fact(1);
    for (int j = 0; j <= k; ++j) {
        if (j > 1) fact *= T(j);
        if (b.empty()) {
            out.push_back(T(0));
            continue;
        }
        // Divide b by (x - t): remainder is b(t), quotient replaces b.
        T carry(0);
        std::vector<T> q(b.size() > 1 ? b.size() - 1 : 0);
        for (std::size_t i = b.size(); i-- > 0;) {
            carry = carry * t + b[i];
            if (i > 0) q[i - 1] = carry;
        }
        out.push_back(fact * carry);
        b = std::move(q);
    }
    return out;
}

/// Coefficients in t of sum_k c_k (t - center)^k.
inline std::vector<double> shift_to_origin(const std::vector<double>& centered, double center) {
    const std::size_t m = centered.size();
    std::vector<double> out(m, 0.0);
    // Horner in the shifted variable: acc <- acc * (t - center) + c_k
    for (std::size_t idx = m; idx-- > 0;) {
        std::vector<double> next(m, 0.0);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            next[i + 1] += out[i];
            next[i] -= center * out[i];
        }
        next[0] += centered[idx];
        out = std::move(next);
    }
    return out;
}

enum class StrictTarget { ConcaveMonotone, ConvexMonotone };

inline const char* to_string(StrictTarget t) {
    return t == StrictTarget::ConcaveMonotone ? "concave-monotone" : "convex-monotone";
}

struct StrictnessCheck {
    bool ok = true;
    double worst_monotone_det = kInf;
    double worst_curvature_det = kInf;
    double worst_point = 0.0;
};

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline int exact_sign_of_determinant(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            sign = -sign;
        }
        if (a[k][k] < 0) sign = -sign;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            const Rational r = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= r * a[k][j];
        }
    }
    return sign;
}

}  // namespace detail

/// Sign of det(f^(i+j+shift)(t) / (i+j+shift)!), i, j = 0..n-1, in exact
/// rational arithmetic. Coefficients and t are taken as the exact binary
/// values of the doubles. shift = 1 gives the monotone matrix, 2 the convex one.
inline int exact_hankel_sign(const Polynomial& p, double t, int n, int shift) {
    BasicPolynomial<Rational> q{{}, p.interval};
    for (double c : p.coeffs) q.coeffs.emplace_back(c);
    const int top = 2 * n - 2 + shift;
    std::vector<Rational> a(static_cast<std::size_t>(top) + 1, Rational(0));
    const auto d = poly_eval_derivatives(q, Rational(t), std::min(top, q.degree() + 2));
    Rational fact(1);
    for (int k = 0; k <= top; ++k) {
        if (k > 1) fact *= k;
        if (k < static_cast<int>(d.size())) a[k] = d[k] / fact;
    }
    std::vector<std::vector<Rational>> h(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[i][j] = a[i + j + shift];
    return detail::exact_sign_of_determinant(std::move(h));
}

/// Verifies that p is strictly n-monotone and strictly n-convex (or n-concave)
/// on the grid: at every point both order-n determinants exceed the scaled
/// tolerance, and their signs are confirmed positive in exact arithmetic.
inline StrictnessCheck check_strictness(const Polynomial& p, int n, StrictTarget target, int grid_size = kDefaultGridSize,
                                        double tol = kPsdTolerance) {
    const FunctionSpec f = as_function(p);
    const FunctionSpec curved = target == StrictTarget::ConvexMonotone ? f : negated(f);
    const Polynomial exact_curved = target == StrictTarget::ConvexMonotone ? p : Polynomial{[&] {
        auto c = p.coeffs;
        for (double& x : c) x = -x;
        return c;
    }(), p.interval};
    StrictnessCheck c;
    double worst_ratio = kInf;
    std::vector<double> passed;
    for (double t : interior_grid(p.interval, grid_size)) {
        const auto mono = dobsch_matrix(f, t, n);
        const auto curv = kraus_matrix(curved, t, n);
        const double dm = determinant(mono.entries);
        const double dc = determinant(curv.entries);
        const double tm = scaled_tolerance(mono.entries, tol);
        const double tc = scaled_tolerance(curv.entries, tol);
        c.worst_monotone_det = std::min(c.worst_monotone_det, dm);
        c.worst_curvature_det = std::min(c.worst_curvature_det, dc);
        const double ratio = std::min(dm / tm, dc / tc);
        if (ratio < worst_ratio) {
            worst_ratio = ratio;
            c.worst_point = t;
        }
        if (!(dm > tm) || !(dc > tc)) c.ok = false;
        passed.push_back(t);
    }
    // Exact confirmation only once the floating-point screen has passed.
    if (c.ok)
        for (double t : passed)
            if (exact_hankel_sign(p, t, n, 1) <= 0 || exact_hankel_sign(exact_curved, t, n, 2) <= 0) {
                c.ok = false;
                c.worst_point = t;
                break;
            }
    return c;
}

inline constexpr int kConstructBudget = 10'000;

/// Polynomial of exact degree m that is strictly n-monotone and strictly
/// n-concave (ConcaveMonotone) or strictly n-convex (ConvexMonotone) on a
/// finite interval.
///
/// Candidates are positive combinations of degree-m truncations of the
/// Moebius germs u / (1 + s u), u = t - mid, which are operator monotone and
/// operator concave for s > 0 (operator convex for s < 0), with the u^m
/// coefficient enlarged slightly to pin the degree. Each candidate is
/// verified on the 129-point grid, with exact determinant signs; the first
/// that passes is returned.
inline Polynomial construct_strict_polynomial(int n, int m, const Interval& interval, StrictTarget target,
                                              std::uint64_t seed = 1, int budget = kConstructBudget) {
    if (n < 1 || n > 4) throw PreconditionError("order n must lie in [1, 4]");
    if (m < 2 * n) throw PreconditionError("degree m must be at least 2n");
    if (!interval.bounded()) throw PreconditionError("construction requires a finite interval");
    const double mid = interval.midpoint();
    const double half = 0.5 * (interval.hi() - interval.lo());
    const double sign = target == StrictTarget::ConcaveMonotone ? 1.0 : -1.0;

    std::optional<Polynomial> best;
    StrictnessCheck best_check;
    double best_score = -kInf;
    for (int attempt = 0; attempt < budget; ++attempt) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        // rho = max |s| * half, log-uniform in [1e-6, 0.5]; the truncation
        // error grows like (m + 1) * rho.
        const double rho = 1e-6 * std::pow(5e5, unit(rng));
        const int terms = n + static_cast<int>(rng() % 3);
        std::vector<double> centered(m + 1, 0.0);
        for (int j = 0; j < terms; ++j) {
            const double s = sign * rho * (0.1 + 0.9 * unit(rng)) / half;
            const double w = 0.5 + unit(rng);
            double coef = w;  // w * (-s)^(k-1)
            for (int k = 1; k <= m; ++k) {
                centered[k] += coef;
                coef *= -s;
            }
        }
        // The truncated top coefficient is constant while the germ's grows on
        // one side of mid by about (m + 1) * rho; the tie-breaker makes up for it.
        const double kappa = std::max(1e-3, (1.0 + 2.0 * unit(rng)) * (m + 1) * rho);
        centered[m] *= 1.0 + kappa;
        // Positive rescaling preserves strictness and lifts the determinants
        // above the absolute floor of the tolerance.
        const double lift = std::pow(rho, -(2 * n - 1));
        for (double& c : centered) c *= lift;

        Polynomial p{shift_to_origin(centered, mid), interval};
        if (p.degree() != m) continue;
        const auto check = check_strictness(p, n, target);
        if (check.ok) return p;
        const double score = std::min(check.worst_monotone_det, check.worst_curvature_det);
        if (score > best_score) {
            best_score = score;
            best = p;
            best_check = check;
        }
    }
    std::string msg = "no strictly " + std::to_string(n) + "-" + to_string(target) + " polynomial of degree " +
                      std::to_string(m) + " found within budget";
    if (best)
        msg += "; best candidate worst determinants (" + format_number(best_check.worst_monotone_det) + ", " +
               format_number(best_check.worst_curvature_det) + ") at t = " + format_number(best_check.worst_point);
    throw SearchExhausted(msg);
}

// ---------------------------------------------------------------------------
// Gap polynomials: n-convex but not (n+1)-convex

struct GapSearchOptions {
    int definitional_trials = 500;
    int search_grid = 33;
    long max_evaluations = 50'000;
    double max_seconds = 60.0;
    int max_restarts = 64;
    SamplingOptions sampling;
};

struct GapCertificate {
    Polynomial polynomial;
    int n = 0;
    std::uint64_t seed = 0;
    GridReport pass_grid;                 // order n, no Indefinite point
    DefinitionalResult pass_definitional;  // order n, unrefuted
    GridPoint fail_point;                 // order n+1, Indefinite Kraus matrix
    Witness fail_witness;                 // order n+1 matrix counterexample
};

namespace detail {

struct GapObjective {
    double margin = -kInf;  // worst order-n margin (>= -1 means no Indefinite point)
    bool alive = false;     // some order-(n+1) Kraus matrix is Indefinite
};

inline GapObjective gap_objective(const Polynomial& p, int n, const std::vector<double>& grid) {
    const FunctionSpec f = as_function(p);
    GapObjective o;
    o.margin = kInf;
    for (double t : grid) {
        const Jet j = jet_lift(f, t, 2 * n + 2);
        o.margin = std::min(o.margin, psd_test(hankel_from_jet(j, MatrixKind::Convex, n)).margin());
        if (!o.alive && !psd_test(hankel_from_jet(j, MatrixKind::Convex, n + 1)).passes()) o.alive = true;
    }
    return o;
}

}  // namespace detail

/// Searches for a polynomial of the given degree in K_n(I) \ K_{n+1}(I) and
/// returns it with evidence from both the derivative and the definitional
/// criteria at each order.
///
/// Restarts alternate between two seed shapes, (t - lo)^degree and a
/// strictly n-convex construction, randomly perturbed after the first
/// round; coordinate descent then raises the worst order-n margin while
/// keeping an Indefinite order-(n+1) point.
inline GapCertificate gap_polynomial_search(int n, const Interval& interval, int degree, std::uint64_t seed,
                                            const GapSearchOptions& opt = {}) {
    if (n < 1 || n > 3) throw PreconditionError("order n must lie in [1, 3]");
    if (degree < 2 * n) throw PreconditionError("degree must be at least 2n");
    if (!interval.bounded()) throw PreconditionError("gap search requires a finite interval");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    const auto grid = interior_grid(interval, opt.search_grid);
    long evaluations = 0;
    std::string last_failure = "no candidate kept an order-(n+1) refutation";

    for (int restart = 0; restart < opt.max_restarts; ++restart) {
        if (evaluations >= opt.max_evaluations || elapsed() > opt.max_seconds) break;
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
        // Coefficients in powers of (t - lo).
        const double lo = interval.lo();
        std::vector<double> centered(degree + 1, 0.0);
        centered[degree] = 1.0;
        if (restart % 2 == 1) {
            try {
                const auto g = construct_strict_polynomial(n, degree, interval, StrictTarget::ConvexMonotone,
                                                           derive_seed(seed, 1000 + restart), 2'000);
                const auto d = poly_eval_derivatives(g, lo, degree);
                for (int k = 0; k <= degree; ++k) centered[k] = d[k] / factorial(k);
            } catch (const SearchExhausted&) {
            }
        }
        if (restart >= 2) {
            std::normal_distribution<double> normal(0.0, 0.2);
            for (int k = 2; k <= degree; ++k) centered[k] *= 1.0 + normal(rng);
            for (int k = 2; k < degree; ++k) centered[k] += 0.1 * normal(rng) * std::fabs(centered[degree]);
        }
        Polynomial p{shift_to_origin(centered, lo), interval};

        auto obj = detail::gap_objective(p, n, grid);
        ++evaluations;
        std::vector<double> step(degree + 1);
        for (int k = 0; k <= degree; ++k) step[k] = 0.1 * std::max(std::fabs(p.coeffs[k]), 1e-3);
        int stalls = 0;
        while (!(obj.alive && obj.margin > 1.0) && stalls < 30 && evaluations < opt.max_evaluations &&
               elapsed() <= opt.max_seconds) {
            bool improved = false;
            for (int k = 2; k <= degree; ++k) {
                for (double dir : {1.0, -1.0}) {
                    Polynomial trial = p;
                    trial.coeffs[k] += dir * step[k];
                    if (trial.degree() != degree) continue;
                    const auto o = detail::gap_objective(trial, n, grid);
                    ++evaluations;
                    if ((o.alive || !obj.alive) && o.margin > obj.margin) {
                        p = std::move(trial);
                        obj = o;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) {
                for (double& s : step) s *= 0.5;
                ++stalls;
            }
        }
        if (!(obj.alive && obj.margin > 1.0)) continue;

        // Full-resolution evidence.
        const FunctionSpec f = as_function(p);
        GapCertificate cert;
        cert.polynomial = p;
        cert.n = n;
        cert.seed = seed;
        cert.pass_grid = grid_classify(f, n, MatrixKind::Convex);
        if (!cert.pass_grid.pass) {
            last_failure = "order-n grid test failed at full resolution";
            continue;
        }
        const auto fail_grid = grid_classify(f, n + 1, MatrixKind::Convex);
        if (fail_grid.pass) {
            last_failure = "no Indefinite order-(n+1) point at full resolution";
            continue;
        }
        cert.fail_point = fail_grid.worst;
        const std::uint64_t trial_seed = derive_seed(seed, 0x6a09e667ULL + restart);
        DefinitionalOptions dopt;
        dopt.sampling = opt.sampling;
        cert.pass_definitional = definitional_test(f, n, MatrixKind::Convex, opt.definitional_trials, trial_seed, dopt);
        if (cert.pass_definitional.refuted) {
            last_failure = "order-n definitional test found a counterexample";
            continue;
        }
        const auto refute = definitional_test(f, n + 1, MatrixKind::Convex, opt.definitional_trials, trial_seed, dopt);
        if (!refute.refuted) {
            last_failure = "order-(n+1) definitional search found no witness";
            continue;
        }
        cert.fail_witness = *refute.witness;
        return cert;
    }
    throw SearchExhausted("gap search exhausted after " + std::to_string(evaluations) +
                          " evaluations: " + last_failure);
}

}  // namespace matconvex
