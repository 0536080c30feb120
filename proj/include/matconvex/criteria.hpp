// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "matconvex/errors.hpp"
#include "matconvex/expr.hpp"
#include "matconvex/jet.hpp"
#include "matconvex/linalg.hpp"

namespace matconvex {

/// Default relative tolerance of the PSD classification; scaled by
/// max(1, inf-norm) of the matrix under test.
inline constexpr double kPsdTolerance = 1e-8;
inline constexpr int kDefaultGridSize = 129;

/// Monotone: entries f^(i+j-1)(t)/(i+j-1)!. Convex: entries f^(i+j)(t)/(i+j)!
/// (1-based i, j).
enum class MatrixKind { Monotone, Convex };

inline const char* to_string(MatrixKind k) { return k == MatrixKind::Monotone ? "monotone" : "convex"; }

struct DerivativeMatrix {
    MatrixKind kind = MatrixKind::Convex;
    int n = 0;
    double base_point = 0.0;
    Matrix entries;
};

enum class PsdClass { PositiveDefinite, BoundaryPSD, Indefinite };

inline const char* to_string(PsdClass c) {
    switch (c) {
        case PsdClass::PositiveDefinite: return "positive-definite";
        case PsdClass::BoundaryPSD: return "boundary-psd";
        case PsdClass::Indefinite: return "indefinite";
    }
    return "";
}

struct PsdVerdict {
    double min_eigenvalue = 0.0;
    std::vector<double> minors;
    PsdClass classification = PsdClass::BoundaryPSD;
    double tolerance = 0.0;  // absolute, after scaling

    bool passes() const noexcept { return classification != PsdClass::Indefinite; }
    /// min_eigenvalue in units of the tolerance; lower is worse.
    double margin() const noexcept { return min_eigenvalue / tolerance; }
};

/// Hankel matrix of the given kind read off a jet of order >= 2n (Convex)
/// or >= 2n-1 (Monotone).
inline DerivativeMatrix hankel_from_jet(const Jet& j, MatrixKind kind, int n) {
    const int offset = kind == MatrixKind::Convex ? 2 : 1;
    if (j.order() < 2 * n - 2 + offset) throw PreconditionError("jet order too small for the requested matrix");
    DerivativeMatrix m{kind, n, j.base, Matrix(n)};
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m.entries(i, k) = j.coeffs[i + k + offset];
    return m;
}

inline int jet_order_for(MatrixKind kind, int n) { return kind == MatrixKind::Convex ? 2 * n : 2 * n - 1; }

inline DerivativeMatrix derivative_matrix(const FunctionSpec& f, double t, int n, MatrixKind kind) {
    if (n < 1) throw PreconditionError("matrix order must be positive");
    return hankel_from_jet(jet_lift(f, t, jet_order_for(kind, n)), kind, n);
}

/// K_n(f; t).
inline DerivativeMatrix kraus_matrix(const FunctionSpec& f, double t, int n) {
    return derivative_matrix(f, t, n, MatrixKind::Convex);
}

inline DerivativeMatrix dobsch_matrix(const FunctionSpec& f, double t, int n) {
    return derivative_matrix(f, t, n, MatrixKind::Monotone);
}

inline double scaled_tolerance(const Matrix& m, double tol) { return tol * std::max(1.0, m.inf_norm()); }

/// Eigenvalue-based PSD classification of a symmetric matrix, with the
/// leading principal minors reported alongside.
inline PsdVerdict psd_test(const Matrix& m, double tol = kPsdTolerance) {
    if (m.size() > 24) throw PreconditionError("psd_test supports matrices up to order 24");
    PsdVerdict v;
    v.tolerance = scaled_tolerance(m, tol);
    v.minors = leading_minors(m);
    v.min_eigenvalue = m.size() ? jacobi_eigen(m).values.front() : 0.0;
    if (v.min_eigenvalue > v.tolerance)
        v.classification = PsdClass::PositiveDefinite;
    else if (v.min_eigenvalue < -v.tolerance)
        v.classification = PsdClass::Indefinite;
    else
        v.classification = PsdClass::BoundaryPSD;
    return v;
}

inline PsdVerdict psd_test(const DerivativeMatrix& m, double tol = kPsdTolerance) { return psd_test(m.entries, tol); }

/// Full determinant of the order-n matrix of the given kind at t.
inline double strict_determinant(const FunctionSpec& f, double t, int n, MatrixKind kind) {
    return determinant(derivative_matrix(f, t, n, kind).entries);
}

/// Strict n-monotonicity / n-convexity test at a single point: the full
/// determinant exceeds the scaled tolerance.
inline bool strict_check(const FunctionSpec& f, double t, int n, MatrixKind kind, double tol = kPsdTolerance) {
    const auto m = derivative_matrix(f, t, n, kind);
    return determinant(m.entries) > scaled_tolerance(m.entries, tol);
}

/// -f on the same domain; n-concavity of f is n-convexity of -f.
inline FunctionSpec negated(const FunctionSpec& f) {
    return FunctionSpec(expr::negate(f.expr), f.domain, "-(" + f.label + ")");
}

// ---------------------------------------------------------------------------
// Perturbation certificate

struct EpsilonSample {
    double epsilon = 0.0;
    std::vector<double> minors;
};

struct PerturbationCertificate {
    double t0 = 0.0;
    int n = 0;
    double eta = 0.0;
    std::vector<double> eta_per_minor;  // eta_m for m = 1..n
    std::vector<EpsilonSample> epsilon_samples;
    PsdVerdict limit_verdict;

    bool valid() const {
        if (!(eta > 0.0)) return false;
        for (const auto& s : epsilon_samples)
            if (s.epsilon <= eta)
                for (double d : s.minors)
                    if (!(d > 0.0)) return false;
        return true;
    }
};

inline constexpr int kEpsilonLadderSteps = 40;

/// Samples the minor polynomials p_m(eps) = D_m(K_n(f + eps g; t0)) on the
/// dyadic ladder 1, 1/2, ..., 2^-40. The window (0, eta] is the longest run
/// of ladder values, starting from the smallest, on which every minor is
/// positive. As eps -> 0 the matrices tend to K_n(f; t0), which is therefore
/// positive semidefinite whenever the window is nonempty.
inline PerturbationCertificate perturbation_certificate(const FunctionSpec& f, const FunctionSpec& g, double t0, int n,
                                                        double tol = kPsdTolerance) {
    const Matrix kg = kraus_matrix(g, t0, n).entries;
    const auto g_minors = leading_minors(kg);
    for (double d : g_minors)
        if (!(d > 0.0)) throw InvalidPerturber("perturbing function must have positive leading Kraus minors at t0");
    if (!strict_check(g, t0, n, MatrixKind::Convex, tol))
        throw InvalidPerturber("perturbing function is not strictly n-convex at t0");

    const Matrix kf = kraus_matrix(f, t0, n).entries;
    PerturbationCertificate cert;
    cert.t0 = t0;
    cert.n = n;
    cert.limit_verdict = psd_test(kf, tol);

    // Ladder from the smallest epsilon upwards.
    std::vector<EpsilonSample> ascending;
    for (int j = kEpsilonLadderSteps; j >= 0; --j) {
        const double eps = std::ldexp(1.0, -j);
        Matrix m(n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = kf(r, c) + eps * kg(r, c);
        ascending.push_back({eps, leading_minors(m)});
    }

    cert.eta_per_minor.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
        if (!(ascending.front().minors[m] > 0.0))
            throw NoPositiveWindow("minor D_" + std::to_string(m + 1) +
                                   " is not positive even at eps = 2^-40; f is not n-convex at t0");
        double eta_m = ascending.front().epsilon;
        for (const auto& s : ascending) {
            if (!(s.minors[m] > 0.0)) break;
            eta_m = s.epsilon;
        }
        cert.eta_per_minor[m] = eta_m;
    }
    cert.eta = *std::min_element(cert.eta_per_minor.begin(), cert.eta_per_minor.end());
    cert.epsilon_samples.assign(ascending.rbegin(), ascending.rend());
    return cert;
}

// ---------------------------------------------------------------------------
// Grid classification

struct GridPoint {
    double t = 0.0;
    PsdVerdict verdict;
};

struct GridReport {
    MatrixKind kind = MatrixKind::Convex;
    int n = 0;
    bool pass = true;
    int indefinite_count = 0;
    int point_count = 0;
    GridPoint worst;
    std::optional<double> first_failure;
};

inline void merge_point(GridReport& r, double t, const PsdVerdict& v) {
    if (r.point_count == 0 || v.margin() < r.worst.verdict.margin()) r.worst = GridPoint{t, v};
    ++r.point_count;
    if (!v.passes()) {
        r.pass = false;
        ++r.indefinite_count;
        if (!r.first_failure) r.first_failure = t;
    }
}

/// PSD test of the order-n matrix of the given kind at every interior grid
/// point; PASS iff no point is Indefinite.
inline GridReport grid_classify(const FunctionSpec& f, int n, MatrixKind kind, int grid_size = kDefaultGridSize,
                                double tol = kPsdTolerance) {
    if (grid_size < 16) throw PreconditionError("grid_size must be at least 16");
    GridReport r;
    r.kind = kind;
    r.n = n;
    for (double t : interior_grid(f.domain, grid_size)) merge_point(r, t, psd_test(derivative_matrix(f, t, n, kind), tol));
    return r;
}

// ---------------------------------------------------------------------------
// Powers t^p

/// det of the order-2 monotonicity matrix of t^p:
/// -(1/12) p^2 (p-1)(p+1) t^(2p-4).
inline double power_monotone_det(double p, double t) {
    return -(1.0 / 12.0) * p * p * (p - 1.0) * (p + 1.0) * std::pow(t, 2.0 * p - 4.0);
}

/// det of K_2(t^p; t): -(1/144) p^2 (p-1)^2 (p-2)(p+1) t^(2p-6).
inline double power_convex_det(double p, double t) {
    return -(1.0 / 144.0) * p * p * (p - 1.0) * (p - 1.0) * (p - 2.0) * (p + 1.0) * std::pow(t, 2.0 * p - 6.0);
}

struct PowerVerdict {
    double p = 0.0;
    bool is_2monotone = false;
    bool is_2convex = false;
};

inline PowerVerdict classify_power(double p) {
    return PowerVerdict{p, p >= 0.0 && p <= 1.0, (p >= -1.0 && p <= 0.0) || (p >= 1.0 && p <= 2.0)};
}

inline FunctionSpec power_function(double p, const Interval& domain = Interval::half_line(0.0)) {
    return FunctionSpec(expr::power(expr::variable(), p), domain);
}

// ---------------------------------------------------------------------------
// Representation functions c = (f')^(-1/2), d = (f'')^(-1/3)

enum class RepresentationKind { MonotoneRep, ConvexRep };

struct RepresentationFunction {
    RepresentationKind kind = RepresentationKind::MonotoneRep;
    FunctionSpec source;

    int derivative_order() const { return kind == RepresentationKind::MonotoneRep ? 1 : 2; }
    double exponent() const { return kind == RepresentationKind::MonotoneRep ? -0.5 : -1.0 / 3.0; }

    /// Jet of the representation function at t, of order `order`.
    Jet jet_at(double t, int order) const {
        Jet base = jet_lift(source, t, order + derivative_order());
        for (int i = 0; i < derivative_order(); ++i) base = jet::derivative(base);
        if (!(base.coeffs[0] > 0.0))
            throw PositivityError(std::string(derivative_order() == 1 ? "f'" : "f''") + " is not positive", t);
        return jet::power(base, exponent());
    }

    double value(double t) const { return jet_at(t, 0).coeffs[0]; }
};

struct RepresentationReport {
    RepresentationKind kind = RepresentationKind::MonotoneRep;
    bool concave = true;
    std::optional<double> first_violation;
    double worst_second_derivative = -kInf;
    double worst_point = 0.0;
    int point_count = 0;
};

/// Checks concavity of c (MonotoneRep) or d (ConvexRep) on the interior
/// grid: the second derivative must stay <= tol * max(1, |value|).
/// Throws PositivityError where f' (resp. f'') <= 0.
inline RepresentationReport representation_concavity(const FunctionSpec& f, RepresentationKind kind,
                                                      int grid_size = kDefaultGridSize, double tol = kPsdTolerance) {
    RepresentationFunction rep{kind, f};
    RepresentationReport r;
    r.kind = kind;
    for (double t : interior_grid(f.domain, grid_size)) {
        const Jet c = rep.jet_at(t, 2);
        const double second = 2.0 * c.coeffs[2];
        ++r.point_count;
        if (second > r.worst_second_derivative) {
            r.worst_second_derivative = second;
            r.worst_point = t;
        }
        if (second > tol * std::max(1.0, std::fabs(c.coeffs[0]))) {
            r.concave = false;
            if (!r.first_violation) r.first_violation = t;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Sign patterns on half-lines

struct SignCheck {
    int k = 0;            // index in (-1)^k f^(order)
    int order = 0;        // derivative order checked
    double t = 0.0;
    double value = 0.0;   // f^(order)(t)
    int required_sign = 1;
    bool ok = true;
};

struct SignPatternReport {
    bool pass = true;
    std::vector<SignCheck> checks;
    /// Concavity/convexity of f and its derivatives implied by the sign
    /// pattern, checked as the sign of the derivative two orders up.
    std::vector<SignCheck> induced;
    std::optional<SignCheck> first_failure;
};

inline constexpr double kSignTolerance = 1e-10;

/// Monotone kind: (-1)^k f^(k+1)(t) >= 0 for k = 0..2n-2.
/// Convex kind:   (-1)^k f^(k+2)(t) >= 0 for k = 0..2n-2.
inline SignPatternReport sign_pattern_check(const FunctionSpec& f, int n, MatrixKind kind,
                                            const std::vector<double>& sample_points, double tol = kSignTolerance) {
    if (f.domain.hi_finite() || !f.domain.lo_finite())
        throw HypothesisError("sign patterns apply to functions on an interval (alpha, inf)");
    if (n < 1) throw PreconditionError("order must be positive");
    const int shift = kind == MatrixKind::Monotone ? 1 : 2;
    const int top = 2 * n - 2 + shift;
    SignPatternReport r;
    auto record = [&](std::vector<SignCheck>& out, int k, int order, double t, double value, int sign) {
        SignCheck c{k, order, t, value, sign, sign * value >= -tol};
        out.push_back(c);
        if (!c.ok) {
            r.pass = false;
            if (!r.first_failure) r.first_failure = c;
        }
    };
    for (double t : sample_points) {
        if (!f.domain.interior_contains(t)) throw DomainError("sample point outside the domain", t);
        const Jet j = jet_lift(f, t, top);
        auto deriv = [&](int order) { return factorial(order) * j.coeffs[order]; };
        for (int k = 0; k <= 2 * n - 2; ++k) record(r.checks, k, k + shift, t, deriv(k + shift), (k % 2) ? -1 : 1);
        if (kind == MatrixKind::Monotone) {
            // f^(2j) concave for 2j <= 2n-4, f^(2j+1) convex for 2j+1 <= 2n-3.
            for (int e = 0; e <= 2 * n - 4; e += 2) record(r.induced, e, e + 2, t, deriv(e + 2), -1);
            for (int o = 1; o <= 2 * n - 3; o += 2) record(r.induced, o, o + 2, t, deriv(o + 2), 1);
        } else {
            // f^(2j) convex for 2j <= 2n-2, f^(2j+1) concave for 2j+1 <= 2n-3.
            for (int e = 0; e <= 2 * n - 2; e += 2) record(r.induced, e, e + 2, t, deriv(e + 2), 1);
            for (int o = 1; o <= 2 * n - 3; o += 2) record(r.induced, o, o + 2, t, deriv(o + 2), -1);
        }
    }
    return r;
}

inline std::vector<double> default_sign_samples(const FunctionSpec& f, int count = 100) {
    return interior_grid(f.domain, count);
}

// ---------------------------------------------------------------------------
// Whole-line rigidity

struct RigidityWitness {
    double t = 0.0;
    double radius = 0.0;
    PsdVerdict verdict;
};

struct RadiusRow {
    double radius = 0.0;
    double worst_minor = 0.0;
};

struct RigidityScan {
    MatrixKind kind = MatrixKind::Convex;
    std::optional<RigidityWitness> witness;
    std::vector<RadiusRow> rows;
};

/// Scans [-R, R] for R = 1, 2, 4, ..., 2^radius_steps for a point where the
/// order-2 matrix is Indefinite. On the whole line only affine functions
/// (Monotone) or quadratics (Convex) are expected to survive.
inline RigidityScan whole_line_rigidity_scan(const FunctionSpec& f, MatrixKind kind, int radius_steps = 20,
                                             int points_per_radius = 65, double tol = kPsdTolerance) {
    if (!f.domain.is_whole_line()) throw HypothesisError("rigidity scan requires a function on the whole real line");
    RigidityScan scan;
    scan.kind = kind;
    for (int s = 0; s <= radius_steps; ++s) {
        const double radius = std::ldexp(1.0, s);
        auto grid = symmetric_grid(radius, points_per_radius);
        std::stable_sort(grid.begin(), grid.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
        RadiusRow row{radius, kInf};
        for (double t : grid) {
            const auto v = psd_test(derivative_matrix(f, t, 2, kind), tol);
            for (double d : v.minors) row.worst_minor = std::min(row.worst_minor, d);
            if (!v.passes() && !scan.witness) scan.witness = RigidityWitness{t, radius, v};
        }
        scan.rows.push_back(row);
        if (scan.witness) break;
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Antiderivatives of 2-monotone functions

/// K_2 of g = integral of f, built from the shifted jet of f, tested on the
/// interior grid. Requires f to pass the order-2 monotonicity grid test.
inline GridReport antiderivative_convexity(const FunctionSpec& f, int grid_size = kDefaultGridSize,
                                           double tol = kPsdTolerance) {
    const auto pre = grid_classify(f, 2, MatrixKind::Monotone, grid_size, tol);
    if (!pre.pass) throw NotMonotone("function is not 2-monotone on its grid; antiderivative test does not apply");
    GridReport r;
    r.kind = MatrixKind::Convex;
    r.n = 2;
    for (double t : interior_grid(f.domain, grid_size)) {
        const Jet g = antiderivative_jet(jet_lift(f, t, 3));
        merge_point(r, t, psd_test(hankel_from_jet(g, MatrixKind::Convex, 2), tol));
    }
    return r;
}

}  // namespace matconvex
