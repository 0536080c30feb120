// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "matconvex/criteria.hpp"
#include "matconvex/errors.hpp"
#include "matconvex/expr.hpp"
#include "matconvex/jet.hpp"
#include "matconvex/linalg.hpp"

namespace matconvex {

inline constexpr int kMaxHermitianDim = 8;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kGapTolerance = 1e-8;

class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(CMatrix m) : m_(std::move(m)) {
        const double scale = std::max(1.0, m_.max_abs());
        for (int i = 0; i < m_.size(); ++i)
            for (int j = 0; j < m_.size(); ++j)
                if (std::abs(m_(i, j) - std::conj(m_(j, i))) > kHermitianTolerance * scale)
                    throw PreconditionError("matrix is not Hermitian");
    }

    /// Hermitian part (M + M*) / 2 of an almost-Hermitian matrix.
    static HermitianMatrix symmetrize(const CMatrix& m) { return HermitianMatrix(0.5 * (m + m.adjoint())); }

    int dim() const noexcept { return m_.size(); }
    const CMatrix& matrix() const noexcept { return m_; }
    std::vector<double> eigenvalues() const { return hermitian_eigenvalues(m_); }
    double min_eigenvalue() const { return dim() ? eigenvalues().front() : 0.0; }
    double max_eigenvalue() const { return dim() ? eigenvalues().back() : 0.0; }

    friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

private:
    CMatrix m_;
};

inline HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix::symmetrize(a.matrix() + b.matrix());
}
inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    return HermitianMatrix::symmetrize(a.matrix() - b.matrix());
}
inline HermitianMatrix operator*(double s, const HermitianMatrix& a) { return HermitianMatrix::symmetrize(s * a.matrix()); }

// ---------------------------------------------------------------------------
// Seeds and sampling

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) { return mix_seed(seed ^ mix_seed(index)); }

using Rng = std::mt19937_64;

struct SamplingOptions {
    /// Bounded window used in place of an unbounded interval.
    std::optional<Interval> truncation;
};

/// Bounded sampling range [a, b] strictly inside the interval, shrunk by the
/// grid margin.
inline std::pair<double, double> sampling_range(const Interval& iv, const SamplingOptions& opt) {
    double lo = iv.lo(), hi = iv.hi();
    if (!iv.bounded()) {
        if (!opt.truncation || !opt.truncation->bounded())
            throw UnboundedInterval("sampling on an unbounded interval needs a bounded truncation window");
        lo = std::max(lo, opt.truncation->lo());
        hi = std::min(hi, opt.truncation->hi());
        if (!(lo < hi)) throw UnboundedInterval("truncation window does not meet the interval");
    }
    const double delta = kGridMargin * (hi - lo);
    return {lo + delta, hi - delta};
}

inline CMatrix complex_gaussian(int rows, Rng& rng) {
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    CMatrix g(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    return g;
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix.
/// Gram-Schmidt leaves a positive real diagonal in R, which is the phase fix.
inline CMatrix haar_unitary(int dim, Rng& rng) {
    CMatrix q = complex_gaussian(dim, rng);
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < j; ++k) {
            Complex dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += std::conj(q(i, k)) * q(i, j);
            for (int i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
        }
        double norm = 0.0;
        for (int i = 0; i < dim; ++i) norm += std::norm(q(i, j));
        norm = std::sqrt(norm);
        for (int i = 0; i < dim; ++i) q(i, j) /= norm;
    }
    return q;
}

inline HermitianMatrix with_spectrum(const CMatrix& u, const std::vector<double>& spectrum) {
    const int n = u.size();
    CMatrix d(n);
    for (int i = 0; i < n; ++i) d(i, i) = spectrum[i];
    return HermitianMatrix::symmetrize(u * d * u.adjoint());
}

/// Random Hermitian matrix with eigenvalues uniform in the (margin-shrunk)
/// interval, conjugated by a Haar unitary.
inline HermitianMatrix random_hermitian(int dim, const Interval& iv, Rng& rng, const SamplingOptions& opt = {}) {
    if (dim < 1 || dim > kMaxHermitianDim) throw PreconditionError("dimension must lie in [1, 8]");
    const auto [a, b] = sampling_range(iv, opt);
    std::uniform_real_distribution<double> uniform(a, b);
    std::vector<double> spectrum(dim);
    for (double& s : spectrum) s = uniform(rng);
    return with_spectrum(haar_unitary(dim, rng), spectrum);
}

// ---------------------------------------------------------------------------
// Functional calculus

/// f(A) = U f(Lambda) U*.
inline HermitianMatrix apply_function(const FunctionSpec& f, const HermitianMatrix& a) {
    for (double ev : a.eigenvalues())
        if (!f.domain.contains(ev)) throw SpectrumOutOfDomain("eigenvalue outside the domain of " + f.label, ev);
    return HermitianMatrix::symmetrize(hermitian_apply(a.matrix(), [&](double x) {
        const double clamped = std::clamp(x, f.domain.lo(), f.domain.hi());
        return evaluate_expr<double>(*f.expr, f.domain.contains(x) ? x : clamped);
    }));
}

struct GapResult {
    HermitianMatrix gap;
    double min_eigenvalue = 0.0;
    double norm = 0.0;  // spectral norm of the gap

    double tolerance(double tol = kGapTolerance) const { return tol * (1.0 + norm); }
    bool violated(double tol = kGapTolerance) const { return min_eigenvalue < -tolerance(tol); }
};

inline GapResult make_gap(HermitianMatrix g) {
    const auto ev = g.eigenvalues();
    GapResult r{std::move(g), ev.front(), std::max(std::fabs(ev.front()), std::fabs(ev.back()))};
    return r;
}

/// lambda f(A) + (1-lambda) f(B) - f(lambda A + (1-lambda) B).
inline GapResult convexity_gap(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b, double lambda) {
    const auto mix = lambda * a + (1.0 - lambda) * b;
    return make_gap(lambda * apply_function(f, a) + (1.0 - lambda) * apply_function(f, b) - apply_function(f, mix));
}

/// f(B) - f(A) for A <= B.
inline GapResult monotonicity_gap(const FunctionSpec& f, const HermitianMatrix& a, const HermitianMatrix& b,
                                  double tol = kGapTolerance) {
    const auto diff = make_gap(b - a);
    if (diff.violated(tol)) throw NotComparable("B - A is not positive semidefinite");
    return make_gap(apply_function(f, b) - apply_function(f, a));
}

// ---------------------------------------------------------------------------
// Definitional counterexample search

enum class WitnessKind { Convexity, Monotonicity };

inline const char* to_string(WitnessKind k) { return k == WitnessKind::Convexity ? "convexity" : "monotonicity"; }

struct Witness {
    HermitianMatrix a;
    HermitianMatrix b;
    double lambda = 1.0;
    double gap_min_eigenvalue = 0.0;
    WitnessKind kind = WitnessKind::Convexity;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

struct DefinitionalOptions {
    SamplingOptions sampling;
    double tol = kGapTolerance;
    int refine_steps = 20;
};

struct DefinitionalResult {
    bool refuted = false;
    int trials = 0;
    double worst_min_eigenvalue = kInf;
    std::optional<Witness> witness;
};

namespace detail {

struct TrialSample {
    HermitianMatrix a;
    HermitianMatrix b;
    double lambda = 1.0;
};

inline TrialSample draw_trial(const FunctionSpec& f, int n, MatrixKind kind, std::uint64_t seed, std::uint64_t trial,
                              const SamplingOptions& sampling) {
    Rng rng(derive_seed(seed, trial));
    if (kind == MatrixKind::Convex) {
        TrialSample s;
        s.a = random_hermitian(n, f.domain, rng, sampling);
        s.b = random_hermitian(n, f.domain, rng, sampling);
        s.lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return s;
    }
    const double top = sampling_range(f.domain, sampling).second;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto a = random_hermitian(n, f.domain, rng, sampling);
        const double room = top - a.max_eigenvalue();
        const int rank = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        CMatrix g = complex_gaussian(n, rng);
        for (int i = 0; i < n; ++i)
            for (int j = rank; j < n; ++j) g(i, j) = 0.0;
        const auto p = HermitianMatrix::symmetrize(g * g.adjoint());
        const double u = unit(rng);
        if (!(room > 0.0) || !(u > 0.0)) continue;
        const double pmax = p.max_eigenvalue();
        if (!(pmax > 0.0)) continue;
        auto b = a + (u * room / pmax) * p;
        if (b.max_eigenvalue() < top) return TrialSample{std::move(a), std::move(b), 1.0};
    }
    throw Error("could not draw a comparable pair inside the interval");
}

inline double trial_gap(const FunctionSpec& f, MatrixKind kind, const TrialSample& s, double lambda, double tol) {
    if (kind == MatrixKind::Convex) return convexity_gap(f, s.a, s.b, lambda).min_eigenvalue;
    return monotonicity_gap(f, s.a, s.b, tol).min_eigenvalue;
}

/// Golden-section search on lambda for the most negative convexity gap;
/// returns the best (lambda, min eigenvalue) seen including the start.
inline std::pair<double, double> refine_lambda(const FunctionSpec& f, const TrialSample& s, int steps) {
    double best_lambda = s.lambda;
    double best = convexity_gap(f, s.a, s.b, s.lambda).min_eigenvalue;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = convexity_gap(f, s.a, s.b, x1).min_eigenvalue;
    double f2 = convexity_gap(f, s.a, s.b, x2).min_eigenvalue;
    auto consider = [&](double x, double v) {
        if (v < best) {
            best = v;
            best_lambda = x;
        }
    };
    consider(x1, f1);
    consider(x2, f2);
    for (int i = 0; i < steps; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = convexity_gap(f, s.a, s.b, x1).min_eigenvalue;
            consider(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = convexity_gap(f, s.a, s.b, x2).min_eigenvalue;
            consider(x2, f2);
        }
    }
    return {best_lambda, best};
}

inline Witness build_witness(const FunctionSpec& f, MatrixKind kind, TrialSample s, std::uint64_t seed,
                             std::uint64_t trial, const DefinitionalOptions& opt) {
    Witness w;
    w.kind = kind == MatrixKind::Convex ? WitnessKind::Convexity : WitnessKind::Monotonicity;
    w.seed = seed;
    w.trial = trial;
    if (kind == MatrixKind::Convex) {
        const auto [lambda, value] = refine_lambda(f, s, opt.refine_steps);
        w.lambda = lambda;
        w.gap_min_eigenvalue = value;
    } else {
        w.lambda = 1.0;
        w.gap_min_eigenvalue = trial_gap(f, kind, s, 1.0, opt.tol);
    }
    w.a = std::move(s.a);
    w.b = std::move(s.b);
    return w;
}

}  // namespace detail

/// Random search for a violation of the matrix inequality defining
/// n-convexity (A, B, lambda) or n-monotonicity (A <= B). Trial i uses the
/// seed derive_seed(seed, i), so results do not depend on evaluation order.
inline DefinitionalResult definitional_test(const FunctionSpec& f, int n, MatrixKind kind, int trials, std::uint64_t seed,
                                            const DefinitionalOptions& opt = {}) {
    if (trials < 1) throw PreconditionError("at least one trial is required");
    if (n < 1 || n > kMaxHermitianDim) throw PreconditionError("dimension must lie in [1, 8]");
    DefinitionalResult r;
    r.trials = trials;
    std::optional<std::uint64_t> worst_trial;
    for (int i = 0; i < trials; ++i) {
        const auto s = detail::draw_trial(f, n, kind, seed, static_cast<std::uint64_t>(i), opt.sampling);
        GapResult gap = kind == MatrixKind::Convex ? convexity_gap(f, s.a, s.b, s.lambda) : monotonicity_gap(f, s.a, s.b, opt.tol);
        if (gap.min_eigenvalue < r.worst_min_eigenvalue) r.worst_min_eigenvalue = gap.min_eigenvalue;
        if (gap.violated(opt.tol) && (!worst_trial || gap.min_eigenvalue <= r.worst_min_eigenvalue)) worst_trial = i;
    }
    if (worst_trial) {
        r.refuted = true;
        auto s = detail::draw_trial(f, n, kind, seed, *worst_trial, opt.sampling);
        r.witness = detail::build_witness(f, kind, std::move(s), seed, *worst_trial, opt);
        r.worst_min_eigenvalue = std::min(r.worst_min_eigenvalue, r.witness->gap_min_eigenvalue);
    }
    return r;
}

/// Regenerates a witness from its seed and trial index.
inline Witness replay_witness(const FunctionSpec& f, int n, MatrixKind kind, std::uint64_t seed, std::uint64_t trial,
                              const DefinitionalOptions& opt = {}) {
    auto s = detail::draw_trial(f, n, kind, seed, trial, opt.sampling);
    return detail::build_witness(f, kind, std::move(s), seed, trial, opt);
}

/// Recomputes the gap of a stored witness from its matrices and lambda.
inline double witness_gap(const FunctionSpec& f, const Witness& w) {
    if (w.kind == WitnessKind::Convexity) return convexity_gap(f, w.a, w.b, w.lambda).min_eigenvalue;
    return monotonicity_gap(f, w.a, w.b).min_eigenvalue;
}

// ---------------------------------------------------------------------------
// Divided differences

/// [t_0, ..., t_k] f. Coinciding points use the Taylor coefficients of f.
inline double divided_difference(const FunctionSpec& f, std::vector<double> points) {
    if (points.empty()) throw PreconditionError("divided difference needs at least one point");
    if (points.size() > 9) throw PreconditionError("divided differences are limited to 9 points");
    for (double t : points)
        if (!f.domain.contains(t)) throw DomainError("divided-difference node outside the domain", t);
    std::sort(points.begin(), points.end());
    // table[i] holds [t_i, ..., t_{i+level}] f
    const int m = static_cast<int>(points.size());
    std::vector<double> table(m);
    for (int i = 0; i < m; ++i) table[i] = evaluate(f, points[i]);
    for (int level = 1; level < m; ++level) {
        for (int i = 0; i + level < m; ++i) {
            const double lo = points[i], hi = points[i + level];
            if (hi == lo)
                table[i] = jet_lift(f, lo, level).coeffs[level];
            else
                table[i] = (table[i + 1] - table[i]) / (hi - lo);
        }
    }
    return table[0];
}

struct DividedDifferenceMatrix {
    std::optional<double> anchor;  // t_0; absent for the first-order (Loewner) matrix
    std::vector<double> points;
    Matrix entries;
};

struct DividedDifferenceVerdict {
    DividedDifferenceMatrix matrix;
    PsdVerdict verdict;
};

/// Matrix of second divided differences [t_i, t_j, t_0] f with its PSD verdict.
inline DividedDifferenceVerdict kraus_divided_matrix(const FunctionSpec& f, double t0, const std::vector<double>& points,
                                                     double tol = kPsdTolerance) {
    const int m = static_cast<int>(points.size());
    if (m < 1 || m > 12) throw PreconditionError("between 1 and 12 nodes are supported");
    DividedDifferenceMatrix dd{t0, points, Matrix(m)};
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) dd.entries(i, j) = dd.entries(j, i) = divided_difference(f, {points[i], points[j], t0});
    auto verdict = psd_test(dd.entries, tol);
    return {std::move(dd), std::move(verdict)};
}

/// Loewner matrix of first divided differences [t_i, t_j] f.
inline DividedDifferenceVerdict loewner_matrix(const FunctionSpec& f, const std::vector<double>& points,
                                               double tol = kPsdTolerance) {
    const int m = static_cast<int>(points.size());
    if (m < 1 || m > 12) throw PreconditionError("between 1 and 12 nodes are supported");
    DividedDifferenceMatrix dd{std::nullopt, points, Matrix(m)};
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) dd.entries(i, j) = dd.entries(j, i) = divided_difference(f, {points[i], points[j]});
    auto verdict = psd_test(dd.entries, tol);
    return {std::move(dd), std::move(verdict)};
}

struct DividedDifferenceReport {
    bool refuted = false;
    int sets = 0;
    DividedDifferenceVerdict worst;
};

/// Runs the divided-difference criterion on `node_sets` node sets of size n.
/// Set 0 anchors at the midpoint with Chebyshev nodes; the remaining sets
/// draw anchor and nodes uniformly from the sampling range.
inline DividedDifferenceReport divided_difference_test(const FunctionSpec& f, int n, MatrixKind kind, int node_sets,
                                                       std::uint64_t seed, const SamplingOptions& sampling = {},
                                                       double tol = kPsdTolerance) {
    if (node_sets < 1) throw PreconditionError("at least one node set is required");
    const auto [a, b] = sampling_range(f.domain, sampling);
    DividedDifferenceReport r;
    for (int s = 0; s < node_sets; ++s) {
        double anchor = 0.5 * (a + b);
        std::vector<double> nodes(n);
        if (s == 0) {
            for (int i = 0; i < n; ++i)
                nodes[i] = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(std::numbers::pi * (2 * i + 1) / (2.0 * n));
        } else {
            Rng rng(derive_seed(seed ^ 0xd1b54a32d192ed03ULL, static_cast<std::uint64_t>(s)));
            std::uniform_real_distribution<double> uniform(a, b);
            anchor = uniform(rng);
            for (double& t : nodes) t = uniform(rng);
        }
        auto v = kind == MatrixKind::Convex ? kraus_divided_matrix(f, anchor, nodes, tol) : loewner_matrix(f, nodes, tol);
        if (r.sets == 0 || v.verdict.margin() < r.worst.verdict.margin()) r.worst = v;
        if (!v.verdict.passes()) r.refuted = true;
        ++r.sets;
    }
    return r;
}

}  // namespace matconvex
