// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matconvex/calculus.hpp"
#include "matconvex/criteria.hpp"
#include "matconvex/expr.hpp"

namespace matconvex {

enum class PropertyKind { Monotone, Convex, Concave };

inline const char* to_string(PropertyKind k) {
    switch (k) {
        case PropertyKind::Monotone: return "monotone";
        case PropertyKind::Convex: return "convex";
        case PropertyKind::Concave: return "concave";
    }
    return "";
}

/// Bounded window used for matrix sampling when the domain is unbounded:
/// ten units from the finite end, or [-10, 10] on the whole line.
inline SamplingOptions default_sampling(const Interval& iv) {
    SamplingOptions s;
    if (iv.bounded()) return s;
    if (iv.lo_finite())
        s.truncation = Interval(iv.lo(), iv.lo() + 10.0);
    else if (iv.hi_finite())
        s.truncation = Interval(iv.hi() - 10.0, iv.hi());
    else
        s.truncation = Interval(-10.0, 10.0);
    return s;
}

struct ClassifyOptions {
    int grid = kDefaultGridSize;
    int trials = 1000;
    int node_sets = 20;
    std::uint64_t seed = 1;
    double tol = kPsdTolerance;
    std::optional<SamplingOptions> sampling;
};

/// Exit codes shared by the command-line tool.
enum ExitCode : int { kExitPass = 0, kExitRefuted = 1, kExitDisagree = 2, kExitInputError = 3 };

struct Classification {
    FunctionSpec function;  // the function actually tested (-f for Concave)
    int n = 0;
    PropertyKind kind = PropertyKind::Convex;
    GridReport derivative;
    DefinitionalResult definitional;
    DividedDifferenceReport divided;

    bool consistent() const {
        const bool d = !derivative.pass;
        return d == definitional.refuted && d == divided.refuted;
    }
    bool refuted() const { return consistent() && !derivative.pass; }
    int exit_code() const { return !consistent() ? kExitDisagree : (derivative.pass ? kExitPass : kExitRefuted); }
};

/// Runs the derivative-grid, definitional and divided-difference criteria
/// for order-n monotonicity, convexity or concavity.
inline Classification classify(const FunctionSpec& f, int n, PropertyKind kind, const ClassifyOptions& opt = {}) {
    Classification c;
    c.n = n;
    c.kind = kind;
    c.function = kind == PropertyKind::Concave ? negated(f) : f;
    const MatrixKind mk = kind == PropertyKind::Monotone ? MatrixKind::Monotone : MatrixKind::Convex;
    const SamplingOptions sampling = opt.sampling.value_or(default_sampling(f.domain));
    c.derivative = grid_classify(c.function, n, mk, opt.grid, opt.tol);
    DefinitionalOptions dopt;
    dopt.sampling = sampling;
    dopt.tol = opt.tol;
    c.definitional = definitional_test(c.function, n, mk, opt.trials, opt.seed, dopt);
    c.divided = divided_difference_test(c.function, n, mk, opt.node_sets, opt.seed, sampling, opt.tol);
    return c;
}

// ---------------------------------------------------------------------------
// Powers

struct PowerRow {
    double t = 0.0;
    double monotone_closed = 0.0;
    double monotone_jet = 0.0;
    double convex_closed = 0.0;
    double convex_jet = 0.0;
};

struct PowerReport {
    PowerVerdict verdict;
    std::vector<PowerRow> rows;
    bool grid_monotone_pass = false;
    bool grid_convex_pass = false;
    double max_relative_error = 0.0;  // closed form vs jet determinants

    /// The closed-form determinants are only a necessary condition: a
    /// 2-monotone (2-convex) power must have a nonnegative determinant.
    bool closed_form_consistent(double tol = kPsdTolerance) const {
        for (const auto& r : rows) {
            if (verdict.is_2monotone && r.monotone_closed < -tol) return false;
            if (verdict.is_2convex && r.convex_closed < -tol) return false;
        }
        return true;
    }
    bool grid_consistent() const {
        return grid_monotone_pass == verdict.is_2monotone && grid_convex_pass == verdict.is_2convex;
    }
};

inline PowerReport power_report(double p, const std::vector<double>& ts, const Interval& grid_interval = Interval(0.5, 2.0),
                                int grid = kDefaultGridSize) {
    PowerReport r;
    r.verdict = classify_power(p);
    const FunctionSpec f = power_function(p);
    for (double t : ts) {
        PowerRow row{t, power_monotone_det(p, t), determinant(dobsch_matrix(f, t, 2).entries), power_convex_det(p, t),
                     determinant(kraus_matrix(f, t, 2).entries)};
        r.max_relative_error = std::max(
            {r.max_relative_error, std::fabs(row.monotone_jet - row.monotone_closed) / std::max(1.0, std::fabs(row.monotone_closed)),
             std::fabs(row.convex_jet - row.convex_closed) / std::max(1.0, std::fabs(row.convex_closed))});
        r.rows.push_back(row);
    }
    const FunctionSpec on_grid = power_function(p, grid_interval);
    r.grid_monotone_pass = grid_classify(on_grid, 2, MatrixKind::Monotone, grid).pass;
    r.grid_convex_pass = grid_classify(on_grid, 2, MatrixKind::Convex, grid).pass;
    return r;
}

}  // namespace matconvex
