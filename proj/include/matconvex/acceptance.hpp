// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bundled acceptance suite, shared by the acceptance test binary and the
// `matconvex selftest` command. Every tolerance is pinned here and multiplied
// by Options::tolerance_scale (1 for the real suite).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "matconvex/calculus.hpp"
#include "matconvex/classify.hpp"
#include "matconvex/criteria.hpp"
#include "matconvex/jet.hpp"
#include "matconvex/parse.hpp"
#include "matconvex/polynomial.hpp"
#include "matconvex/report.hpp"

namespace matconvex::acceptance {

struct Options {
    std::uint64_t seed = 1;
    double tolerance_scale = 1.0;
};

struct Result {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteEntry {
    std::string text;
    bool expect_refuted = false;
};

/// Criterion-3 suite on (0.1, 4). The reciprocal enters as -1/x for
/// monotonicity and 1/x for convexity.
inline std::vector<SuiteEntry> consistency_suite(MatrixKind kind) {
    if (kind == MatrixKind::Monotone)
        return {{"x^2 on (0.1,4)", true},        {"x^3 on (0.1,4)", true},      {"x^0.5 on (0.1,4)", false},
                {"-1/x on (0.1,4)", false},      {"log(1+x) on (0.1,4)", false}, {"exp(x) on (0.1,4)", true},
                {"x/(1+x) on (0.1,4)", false},   {"x - log(1+x) on (0.1,4)", true}};
    return {{"x^2 on (0.1,4)", false},      {"x^3 on (0.1,4)", true},      {"x^0.5 on (0.1,4)", true},
            {"1/x on (0.1,4)", false},      {"log(1+x) on (0.1,4)", true}, {"exp(x) on (0.1,4)", true},
            {"x/(1+x) on (0.1,4)", true},   {"x - log(1+x) on (0.1,4)", false}};
}

inline ClassifyOptions consistency_options(std::uint64_t seed) {
    ClassifyOptions o;
    o.trials = 1000;
    o.node_sets = 20;
    o.seed = seed;
    return o;
}

/// Classification reports for the criterion-3 suite, both kinds, order 2.
inline std::vector<Report> consistency_reports(std::uint64_t seed) {
    std::vector<Report> out;
    for (MatrixKind kind : {MatrixKind::Monotone, MatrixKind::Convex}) {
        const PropertyKind pk = kind == MatrixKind::Monotone ? PropertyKind::Monotone : PropertyKind::Convex;
        for (const auto& e : consistency_suite(kind)) {
            const auto c = classify(parse(e.text), 2, pk, consistency_options(seed));
            out.push_back(make_report("classify", c, seed));
        }
    }
    return out;
}

inline Report gap_report(std::uint64_t seed) {
    const auto cert = gap_polynomial_search(1, Interval(0.1, 2.0), 3, seed);
    Report r;
    r.command = "gap-search";
    r.function = as_function(cert.polynomial).text();
    r.interval = to_string(cert.polynomial.interval);
    r.n = 1;
    r.kind = "convex";
    r.seed = seed;
    r.verdicts = Json{{"order_n", "PASS"}, {"order_n_plus_1", "REFUTED"}};
    r.details = Json{{"certificate", to_json(cert)}};
    return r;
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

inline Result power_sweep(const Options& o) {
    (void)o;
    Result r{1, "power classification boundary sweep", true, {}, 0.0};
    for (double p : {-1.5, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto v = classify_power(p);
        const bool mono_expected = p >= 0.0 && p <= 1.0;
        const bool conv_expected = (p >= -1.0 && p <= 0.0) || (p >= 1.0 && p <= 2.0);
        const auto f = power_function(p, Interval(0.5, 2.0));
        const bool grid_mono = grid_classify(f, 2, MatrixKind::Monotone).pass;
        const bool grid_conv = grid_classify(f, 2, MatrixKind::Convex).pass;
        if (v.is_2monotone != mono_expected || v.is_2convex != conv_expected || grid_mono != mono_expected ||
            grid_conv != conv_expected) {
            r.pass = false;
            r.detail += "p=" + fmt(p) + " mismatch; ";
        }
    }
    if (r.pass) r.detail = "11 exponents: closed classification and grid verdicts agree";
    return r;
}

inline Result closed_forms(const Options& o) {
    Result r{2, "closed-form determinants vs jets", true, {}, 0.0};
    Rng rng(derive_seed(o.seed, 2));
    std::uniform_real_distribution<double> pd(-2.0, 3.0), td(0.5, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double p = pd(rng), t = td(rng);
        const auto f = power_function(p);
        const double cm = power_monotone_det(p, t), cc = power_convex_det(p, t);
        const double em = std::fabs(determinant(dobsch_matrix(f, t, 2).entries) - cm) / std::max(1.0, std::fabs(cm));
        const double ec = std::fabs(determinant(kraus_matrix(f, t, 2).entries) - cc) / std::max(1.0, std::fabs(cc));
        worst = std::max({worst, em, ec});
    }
    r.pass = worst <= 1e-9 * o.tolerance_scale;
    r.detail = "50 samples, worst scaled error " + fmt(worst) + " (limit 1e-9)";
    return r;
}

inline Result consistency(const Options& o) {
    Result r{3, "cross-criterion consistency", true, {}, 0.0};
    const double tol = kPsdTolerance * o.tolerance_scale;
    int count = 0;
    for (MatrixKind kind : {MatrixKind::Monotone, MatrixKind::Convex}) {
        const PropertyKind pk = kind == MatrixKind::Monotone ? PropertyKind::Monotone : PropertyKind::Convex;
        for (const auto& e : consistency_suite(kind)) {
            const FunctionSpec f = parse(e.text);
            auto opts = consistency_options(o.seed);
            opts.tol = tol;
            const auto c = classify(f, 2, pk, opts);
            ++count;
            if (!c.consistent()) {
                r.pass = false;
                r.detail += e.text + " " + to_string(kind) + ": criteria disagree; ";
                continue;
            }
            if (c.refuted() != e.expect_refuted) {
                r.pass = false;
                r.detail += e.text + " " + to_string(kind) + ": unexpected verdict; ";
            }
            if (c.refuted()) {
                const auto& w = *c.definitional.witness;
                const auto replayed = replay_witness(f, 2, kind, w.seed, w.trial,
                                                     DefinitionalOptions{default_sampling(f.domain), tol, 20});
                const auto stored = witness_from_json(to_json(w));
                const double from_data = witness_gap(f, stored);
                if (std::fabs(replayed.gap_min_eigenvalue - w.gap_min_eigenvalue) > 1e-12 ||
                    !(from_data < -kGapTolerance * o.tolerance_scale)) {
                    r.pass = false;
                    r.detail += e.text + ": witness does not replay; ";
                }
            }
        }
    }
    // exp: det K_2(exp; t) = -e^{2t}/144
    const auto ex = parse("exp(x) on (0.1,4)");
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double t = 0.1 + 3.9 * (i + 0.5) / 10.0;
        const double expected = -std::exp(2.0 * t) / 144.0;
        worst = std::max(worst, std::fabs(determinant(kraus_matrix(ex, t, 2).entries) - expected) / std::fabs(expected));
    }
    if (!(worst <= 1e-10 * o.tolerance_scale)) {
        r.pass = false;
        r.detail += "exp Kraus determinant error " + fmt(worst) + "; ";
    }
    if (r.pass)
        r.detail = std::to_string(count) + " classifications consistent; witnesses replay; exp det error " + fmt(worst);
    return r;
}

inline Result sign_patterns(const Options& o) {
    Result r{4, "sign-pattern theorem on (0, inf)", true, {}, 0.0};
    const double tol = kSignTolerance * o.tolerance_scale;
    int checks = 0;
    auto run = [&](const std::vector<std::string>& texts, MatrixKind kind) {
        for (const auto& text : texts)
            for (int n : {2, 3}) {
                const auto f = parse(text);
                const auto rep = sign_pattern_check(f, n, kind, default_sign_samples(f, 100), tol);
                checks += static_cast<int>(rep.checks.size());
                if (!rep.pass) {
                    r.pass = false;
                    r.detail += text + " n=" + std::to_string(n) + " fails at order " +
                                std::to_string(rep.first_failure->order) + " t=" + fmt(rep.first_failure->t) + "; ";
                }
            }
    };
    run({"-1/x on (0,inf)", "x^0.5 on (0,inf)", "log(1+x) on (0,inf)", "x/(1+x) on (0,inf)"}, MatrixKind::Monotone);
    run({"x^2 on (0,inf)", "x - log(1+x) on (0,inf)"}, MatrixKind::Convex);
    if (r.pass) r.detail = std::to_string(checks) + " sign checks at 100 mapped points passed";
    return r;
}

inline Result antiderivatives(const Options& o) {
    Result r{5, "antiderivative of 2-monotone is 2-convex", true, {}, 0.0};
    for (const char* text : {"x/(1+x) on (0,10)", "x^0.5 on (0.1,9)", "1 on (0,10)"}) {
        const auto rep = antiderivative_convexity(parse(text), kDefaultGridSize, kPsdTolerance * o.tolerance_scale);
        if (!rep.pass) {
            r.pass = false;
            r.detail += std::string(text) + " fails at t=" + fmt(*rep.first_failure) + "; ";
        }
    }
    if (r.pass) r.detail = "3 functions, 129 points each, no Indefinite K_2(g)";
    return r;
}

inline Result rigidity(const Options& o) {
    Result r{6, "whole-line rigidity", true, {}, 0.0};
    const double tol = kPsdTolerance * o.tolerance_scale;
    const auto e = whole_line_rigidity_scan(parse("exp(x)"), MatrixKind::Convex, 20, 65, tol);
    if (!e.witness || e.witness->radius > 1.0) {
        r.pass = false;
        r.detail += "no exp witness within radius 1; ";
    }
    for (const auto& [text, kind] : std::vector<std::pair<std::string, MatrixKind>>{
             {"poly[0,1]", MatrixKind::Monotone},
             {"1 + 2*x", MatrixKind::Monotone},
             {"poly[0,1]", MatrixKind::Convex},
             {"poly[1,0,1]", MatrixKind::Convex},
             {"x^2", MatrixKind::Convex}}) {
        const auto s = whole_line_rigidity_scan(parse(text), kind, 20, 65, tol);
        if (s.witness || s.rows.back().radius != std::ldexp(1.0, 20)) {
            r.pass = false;
            r.detail += text + " produced a witness; ";
        }
    }
    const auto cube = whole_line_rigidity_scan(parse("x^3"), MatrixKind::Monotone, 20, 65, tol);
    if (!cube.witness) {
        r.pass = false;
        r.detail += "no 2-monotonicity witness for x^3; ";
    }
    if (r.pass)
        r.detail = "exp witness at t=" + fmt(e.witness->t) + "; affine/quadratic clean to R=2^20; x^3 witness at t=" +
                   fmt(cube.witness->t);
    return r;
}

inline Result jet_accuracy(const Options& o) {
    Result r{7, "jet derivatives vs finite differences", true, {}, 0.0};
    // Natural domains; the 25 sample points lie in (0.1, 4).
    const std::vector<std::pair<std::string, double>> suite = {
        {"x^2", kInf},          {"x^3", kInf},          {"x^0.5 on (0,inf)", 0.0}, {"1/x on (0,inf)", 0.0},
        {"-1/x on (0,inf)", 0.0}, {"log(1+x) on (-1,inf)", -1.0}, {"exp(x)", kInf},
        {"x/(1+x) on (-1,inf)", -1.0}, {"x - log(1+x) on (-1,inf)", -1.0}};
    double worst = 0.0;
    std::string worst_at;
    for (const auto& [text, singular] : suite) {
        const auto f = parse(text);
        for (double t : interior_grid(Interval(0.1, 4.0), 25)) {
            const double scale = std::isfinite(singular) ? t - singular : 1.0;
            for (int k = 0; k <= 6; ++k) {
                const double d = derivative(f, t, k);
                const double fd = finite_difference_oracle(f, t, k, default_fd_step(k, scale));
                const double err = std::fabs(d - fd) / std::max(1.0, std::fabs(d));
                if (err > worst) {
                    worst = err;
                    worst_at = text + " k=" + std::to_string(k) + " t=" + fmt(t);
                }
            }
        }
    }
    r.pass = worst <= 1e-6 * o.tolerance_scale;
    r.detail = "worst relative error " + fmt(worst) + " (" + worst_at + "), limit 1e-6";
    return r;
}

inline Result perturbation(const Options& o) {
    Result r{8, "perturbation certificate for t^2 at 0", true, {}, 0.0};
    const auto g = construct_strict_polynomial(2, 4, Interval(-1.0, 1.0), StrictTarget::ConvexMonotone, o.seed);
    const auto cert = perturbation_certificate(parse("x^2"), as_function(g), 0.0, 2, kPsdTolerance * o.tolerance_scale);
    r.pass = cert.eta > 0.0 && cert.valid() && cert.limit_verdict.classification == PsdClass::BoundaryPSD;
    r.detail = "eta=" + fmt(cert.eta) + ", limit " + to_string(cert.limit_verdict.classification);
    return r;
}

/// Strictness determinants recomputed from exact polynomial derivatives,
/// independently of the jet path used during construction.
inline double worst_strictness_ratio(const Polynomial& p, int n, StrictTarget target, double tol) {
    double worst = kInf;
    for (double t : interior_grid(p.interval, kDefaultGridSize)) {
        const auto d = poly_eval_derivatives(p, t, std::min(2 * n, p.degree() + 2));
        auto a = [&](int k) { return k < static_cast<int>(d.size()) ? d[k] / factorial(k) : 0.0; };
        Matrix mono(n), curv(n);
        const double sign = target == StrictTarget::ConvexMonotone ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                mono(i, j) = a(i + j + 1);
                curv(i, j) = sign * a(i + j + 2);
            }
        worst = std::min({worst, determinant(mono) / scaled_tolerance(mono, tol),
                          determinant(curv) / scaled_tolerance(curv, tol)});
    }
    return worst;
}

inline Result constructions(const Options& o) {
    Result r{9, "strict polynomial constructions", true, {}, 0.0};
    const double tol = kPsdTolerance * o.tolerance_scale;
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{1, 2}, {1, 5}, {2, 4}, {2, 6}}) {
        for (StrictTarget target : {StrictTarget::ConcaveMonotone, StrictTarget::ConvexMonotone}) {
            try {
                const auto p = construct_strict_polynomial(n, m, Interval(-1.0, 1.0), target, o.seed);
                const double ratio = worst_strictness_ratio(p, n, target, tol);
                if (p.degree() != m || !(ratio > 1.0)) {
                    r.pass = false;
                    r.detail += "(" + std::to_string(n) + "," + std::to_string(m) + ") " + to_string(target) +
                                " fails re-verification; ";
                }
            } catch (const SearchExhausted& e) {
                r.pass = false;
                r.detail += e.what();
                r.detail += "; ";
            }
        }
    }
    if (r.pass) r.detail = "4 (n,m) pairs x 2 targets constructed; exact degree; determinants above tolerance";
    return r;
}

inline Result gap_search(const Options& o) {
    Result r{10, "gap polynomial search n=1, degree 3", true, {}, 0.0};
    try {
        const auto cert = gap_polynomial_search(1, Interval(0.1, 2.0), 3, o.seed);
        const bool indefinite = cert.fail_point.verdict.classification == PsdClass::Indefinite;
        const bool witness = cert.fail_witness.gap_min_eigenvalue < -1e-6 * o.tolerance_scale;
        const bool replay = std::fabs(witness_gap(as_function(cert.polynomial), cert.fail_witness) -
                                      cert.fail_witness.gap_min_eigenvalue) <= 1e-12;
        r.pass = indefinite && witness && replay && cert.pass_grid.pass && !cert.pass_definitional.refuted &&
                 cert.polynomial.degree() == 3;
        r.detail = "witness gap " + fmt(cert.fail_witness.gap_min_eigenvalue) + ", Indefinite K_2 at t=" +
                   fmt(cert.fail_point.t);
    } catch (const SearchExhausted& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

inline Result determinism(const Options& o) {
    Result r{11, "determinism of reports", true, {}, 0.0};
    const auto a = consistency_reports(o.seed);
    const auto b = consistency_reports(o.seed);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (deterministic_dump(a[i]) != deterministic_dump(b[i])) {
            r.pass = false;
            r.detail += a[i].function + " differs; ";
        }
    if (deterministic_dump(gap_report(o.seed)) != deterministic_dump(gap_report(o.seed))) {
        r.pass = false;
        r.detail += "gap report differs; ";
    }
    if (r.pass) r.detail = std::to_string(a.size()) + " classification reports and the gap report are byte-identical";
    return r;
}

}  // namespace detail

inline std::vector<std::function<Result(const Options&)>> criteria() {
    return {detail::power_sweep, detail::closed_forms,  detail::consistency,   detail::sign_patterns,
            detail::antiderivatives, detail::rigidity,  detail::jet_accuracy,  detail::perturbation,
            detail::constructions,  detail::gap_search, detail::determinism};
}

/// Runs every criterion; exceptions count as failures.
inline std::vector<Result> run(const Options& o = {}) {
    std::vector<Result> out;
    int id = 1;
    for (const auto& c : criteria()) {
        const auto start = std::chrono::steady_clock::now();
        Result r;
        try {
            r = c(o);
        } catch (const std::exception& e) {
            r = Result{id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(r);
        ++id;
    }
    return out;
}

/// One table line: id, PASS/FAIL, name, seconds, detail.
inline std::string format_line(const Result& r) {
    char head[96];
    std::snprintf(head, sizeof head, "%2d %s %-45s %6.2fs ", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    return head + r.detail;
}

inline bool all_pass(const std::vector<Result>& results) {
    return std::all_of(results.begin(), results.end(), [](const Result& r) { return r.pass; });
}

inline Json to_json(const std::vector<Result>& results) {
    Json a = Json::array();
    for (const auto& r : results)
        a.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    return a;
}

}  // namespace matconvex::acceptance
