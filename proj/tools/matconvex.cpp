// SPDX-License-Identifier: Apache-2.0
// matconvex: decide, certify and refute matrix monotonicity and convexity.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matconvex/acceptance.hpp"
#include "matconvex/classify.hpp"
#include "matconvex/criteria.hpp"
#include "matconvex/parse.hpp"
#include "matconvex/polynomial.hpp"
#include "matconvex/report.hpp"

using namespace matconvex;

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
    std::string json_path;
    std::string csv_path;
    std::uint64_t seed = 1;
    double tol = kPsdTolerance;
};

std::string fmt(double v) { return format_number(v); }

// "a,b" is shorthand for the open interval (a,b).
Interval interval_arg(const std::string& s) {
    if (!s.empty() && (s.front() == '(' || s.front() == '[')) return parse_interval(s);
    return parse_interval("(" + s + ")");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot write " + path);
    out << text << '\n';
}

int finish(Report& r, const Common& c, Clock::time_point start) {
    r.seed = c.seed;
    r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    write_text(c.json_path, Json(r).dump(2));
    return r.exit_code;
}

void print_verdict(const char* label, const PsdVerdict& v) {
    std::printf("  %s: %s, min eigenvalue %s\n", label, to_string(v.classification), fmt(v.min_eigenvalue).c_str());
    for (std::size_t m = 0; m < v.minors.size(); ++m) std::printf("    D_%zu = %s\n", m + 1, fmt(v.minors[m]).c_str());
}

void print_witness(const Witness& w) {
    std::printf("  witness: %s gap eigenvalue %s (seed %llu, trial %llu, lambda %s)\n", to_string(w.kind),
                fmt(w.gap_min_eigenvalue).c_str(), static_cast<unsigned long long>(w.seed),
                static_cast<unsigned long long>(w.trial), fmt(w.lambda).c_str());
}

int cmd_classify(const std::string& text, int n, const std::string& kind_text, int grid, int trials, int node_sets,
                 const std::string& window, const Common& c) {
    const auto start = Clock::now();
    const FunctionSpec f = parse(text);
    PropertyKind kind;
    if (kind_text == "monotone")
        kind = PropertyKind::Monotone;
    else if (kind_text == "convex")
        kind = PropertyKind::Convex;
    else
        kind = PropertyKind::Concave;
    ClassifyOptions opt;
    opt.grid = grid;
    opt.trials = trials;
    opt.node_sets = node_sets;
    opt.seed = c.seed;
    opt.tol = c.tol;
    if (!window.empty()) opt.sampling = SamplingOptions{interval_arg(window)};
    const auto cls = classify(f, n, kind, opt);

    std::printf("%s on %s, n = %d, %s\n", f.label.c_str(), to_string(f.domain).c_str(), n, to_string(kind));
    std::printf("derivative grid (%d points): %s, %d indefinite\n", cls.derivative.point_count,
                cls.derivative.pass ? "PASS" : "REFUTED", cls.derivative.indefinite_count);
    std::printf("  worst point t = %s\n", fmt(cls.derivative.worst.t).c_str());
    print_verdict("matrix", cls.derivative.worst.verdict);
    std::printf("definitional (%d trials): %s, worst gap eigenvalue %s\n", cls.definitional.trials,
                cls.definitional.refuted ? "REFUTED" : "UNREFUTED", fmt(cls.definitional.worst_min_eigenvalue).c_str());
    if (cls.definitional.witness) print_witness(*cls.definitional.witness);
    std::printf("divided differences (%d node sets): %s\n", cls.divided.sets, cls.divided.refuted ? "REFUTED" : "UNREFUTED");
    print_verdict("worst set", cls.divided.worst.verdict);
    const int code = cls.exit_code();
    std::printf("%s\n", code == kExitPass ? "PASS" : code == kExitRefuted ? "REFUTED" : "criteria DISAGREE");

    if (!c.csv_path.empty()) {
        std::ostringstream csv;
        csv << "t,min_eigenvalue,classification\n";
        for (double t : interior_grid(f.domain.bounded() ? f.domain : default_sampling(f.domain).truncation.value(), grid)) {
            const auto v = psd_test(derivative_matrix(cls.function, t, n,
                                                      kind == PropertyKind::Monotone ? MatrixKind::Monotone : MatrixKind::Convex),
                                    c.tol);
            csv << fmt(t) << ',' << fmt(v.min_eigenvalue) << ',' << to_string(v.classification) << '\n';
        }
        write_text(c.csv_path, csv.str());
    }
    Report r = make_report("classify", cls, c.seed);
    return finish(r, c, start);
}

int cmd_power(double p, double t_lo, double t_hi, int points, int grid, const Common& c) {
    const auto start = Clock::now();
    std::vector<double> ts;
    for (int i = 0; i < points; ++i) ts.push_back(points == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (points - 1));
    const auto rep = power_report(p, ts, Interval(0.5, 2.0), grid);

    std::printf("t^%s on (0, inf)\n", fmt(p).c_str());
    std::printf("  2-monotone: %s (grid on (0.5, 2): %s)\n", rep.verdict.is_2monotone ? "true" : "false",
                rep.grid_monotone_pass ? "PASS" : "FAIL");
    std::printf("  2-convex:   %s (grid on (0.5, 2): %s)\n", rep.verdict.is_2convex ? "true" : "false",
                rep.grid_convex_pass ? "PASS" : "FAIL");
    std::printf("  %-12s %-24s %-24s\n", "t", "monotone det", "convex det");
    for (const auto& row : rep.rows)
        std::printf("  %-12s %-24s %-24s\n", fmt(row.t).c_str(), fmt(row.monotone_closed).c_str(), fmt(row.convex_closed).c_str());
    std::printf("  closed form vs jets: max relative error %s\n", fmt(rep.max_relative_error).c_str());

    if (!c.csv_path.empty()) {
        std::ostringstream csv;
        csv << "t,monotone_det_closed,monotone_det_jet,convex_det_closed,convex_det_jet\n";
        for (const auto& row : rep.rows)
            csv << fmt(row.t) << ',' << fmt(row.monotone_closed) << ',' << fmt(row.monotone_jet) << ','
                << fmt(row.convex_closed) << ',' << fmt(row.convex_jet) << '\n';
        write_text(c.csv_path, csv.str());
    }
    Report r;
    r.command = "power";
    r.function = "x^" + fmt(p);
    r.interval = to_string(Interval::half_line(0.0));
    r.n = 2;
    r.kind = "monotone+convex";
    r.verdicts = Json{{"monotone", rep.verdict.is_2monotone ? "PASS" : "REFUTED"},
                      {"convex", rep.verdict.is_2convex ? "PASS" : "REFUTED"},
                      {"consistent", rep.grid_consistent() && rep.closed_form_consistent()}};
    r.details = to_json(rep);
    r.exit_code = rep.grid_consistent() && rep.closed_form_consistent() ? kExitPass : kExitDisagree;
    return finish(r, c, start);
}

int cmd_scan_line(const std::string& text, const std::string& kind_text, int steps, int points, const Common& c) {
    const auto start = Clock::now();
    const FunctionSpec f = parse(text);
    const MatrixKind kind = kind_text == "monotone" ? MatrixKind::Monotone : MatrixKind::Convex;
    const auto scan = whole_line_rigidity_scan(f, kind, steps, points, c.tol);

    std::printf("%s on the real line, 2-%s scan to R = 2^%d\n", f.label.c_str(), to_string(kind), steps);
    if (scan.witness) {
        std::printf("  witness at t = %s (radius %s)\n", fmt(scan.witness->t).c_str(), fmt(scan.witness->radius).c_str());
        print_verdict("matrix", scan.witness->verdict);
    } else {
        std::printf("  no witness: consistent with %s\n", kind == MatrixKind::Monotone ? "an affine function" : "a quadratic");
    }
    if (!c.csv_path.empty()) {
        std::ostringstream csv;
        csv << "radius,worst_minor\n";
        for (const auto& row : scan.rows) csv << fmt(row.radius) << ',' << fmt(row.worst_minor) << '\n';
        write_text(c.csv_path, csv.str());
    }
    Report r;
    r.command = "scan-line";
    r.function = f.label;
    r.interval = to_string(f.domain);
    r.n = 2;
    r.kind = to_string(kind);
    r.verdicts = Json{{"rigidity", scan.witness ? "REFUTED" : "PASS"}};
    r.details = to_json(scan);
    r.exit_code = scan.witness ? kExitRefuted : kExitPass;
    return finish(r, c, start);
}

int cmd_construct(int n, int m, const std::string& interval, const std::string& target_text, int budget, const Common& c) {
    const auto start = Clock::now();
    const Interval iv = interval_arg(interval);
    const StrictTarget target =
        target_text == "concave-monotone" ? StrictTarget::ConcaveMonotone : StrictTarget::ConvexMonotone;
    Report r;
    r.command = "construct";
    r.interval = to_string(iv);
    r.n = n;
    r.kind = to_string(target);
    try {
        const auto p = construct_strict_polynomial(n, m, iv, target, c.seed, budget);
        const auto check = check_strictness(p, n, target, kDefaultGridSize, c.tol);
        r.function = as_function(p).label;
        std::printf("strictly %d-%s polynomial of degree %d on %s\n", n, to_string(target), p.degree(), r.interval.c_str());
        for (int k = 0; k <= p.degree(); ++k) std::printf("  c_%d = %s\n", k, fmt(p.coeffs[k]).c_str());
        std::printf("  verification grid (%d points): worst monotone det %s, worst curvature det %s at t = %s\n",
                    kDefaultGridSize, fmt(check.worst_monotone_det).c_str(), fmt(check.worst_curvature_det).c_str(),
                    fmt(check.worst_point).c_str());
        r.verdicts = Json{{"strict", check.ok ? "PASS" : "REFUTED"}};
        r.details = Json{{"polynomial", to_json(p)},
                         {"worst_monotone_det", number(check.worst_monotone_det)},
                         {"worst_curvature_det", number(check.worst_curvature_det)},
                         {"worst_point", number(check.worst_point)}};
        r.exit_code = check.ok ? kExitPass : kExitRefuted;
    } catch (const SearchExhausted& e) {
        std::printf("search exhausted: %s\n", e.what());
        r.verdicts = Json{{"strict", "NOT FOUND"}};
        r.details = Json{{"error", e.what()}};
        r.exit_code = kExitRefuted;
    }
    return finish(r, c, start);
}

int cmd_gap_search(int n, int degree, const std::string& interval, int trials, double max_seconds, const Common& c) {
    const auto start = Clock::now();
    const Interval iv = interval_arg(interval);
    GapSearchOptions opt;
    opt.definitional_trials = trials;
    opt.max_seconds = max_seconds;
    Report r;
    r.command = "gap-search";
    r.interval = to_string(iv);
    r.n = n;
    r.kind = "convex";
    try {
        const auto cert = gap_polynomial_search(n, iv, degree, c.seed, opt);
        r.function = as_function(cert.polynomial).label;
        std::printf("%d-convex but not %d-convex on %s: %s\n", n, n + 1, r.interval.c_str(), r.function.c_str());
        std::printf("  order %d grid: %s; definitional: %s\n", n, cert.pass_grid.pass ? "PASS" : "FAIL",
                    cert.pass_definitional.refuted ? "REFUTED" : "UNREFUTED");
        std::printf("  order %d indefinite at t = %s\n", n + 1, fmt(cert.fail_point.t).c_str());
        print_verdict("matrix", cert.fail_point.verdict);
        print_witness(cert.fail_witness);
        r.verdicts = Json{{"order_n", "PASS"}, {"order_n_plus_1", "REFUTED"}};
        r.details = to_json(cert);
        r.exit_code = kExitPass;
    } catch (const SearchExhausted& e) {
        std::printf("search exhausted: %s\n", e.what());
        r.verdicts = Json{{"gap", "NOT FOUND"}};
        r.details = Json{{"error", e.what()}};
        r.exit_code = kExitRefuted;
    }
    return finish(r, c, start);
}

int cmd_selftest(double tol_scale, const Common& c) {
    acceptance::Options o;
    o.seed = c.seed;
    o.tolerance_scale = tol_scale;
    const auto results = acceptance::run(o);
    for (const auto& res : results) std::printf("%s\n", acceptance::format_line(res).c_str());
    const bool ok = acceptance::all_pass(results);
    std::printf("%s\n", ok ? "all criteria passed" : "FAILED");
    write_text(c.json_path, Json{{"schema", kSchemaVersion}, {"tool_version", kToolVersion}, {"seed", c.seed},
                                 {"tolerance_scale", tol_scale}, {"pass", ok}, {"criteria", acceptance::to_json(results)}}
                                .dump(2));
    return ok ? kExitPass : kExitRefuted;
}

// Recomputes the gap eigenvalue of every witness embedded in a report.
int cmd_replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read " + path);
    Report r = Json::parse(in).get<Report>();
    const FunctionSpec f = parse(r.function + " on " + r.interval);
    std::vector<Json> found;
    std::function<void(const Json&)> collect = [&](const Json& j) {
        if (j.is_object()) {
            if (j.contains("gap_min_eigenvalue") && j.contains("A")) found.push_back(j);
            for (const auto& [key, value] : j.items()) collect(value);
        } else if (j.is_array()) {
            for (const auto& value : j) collect(value);
        }
    };
    collect(r.details);
    bool ok = true;
    for (const auto& j : found) {
        const Witness w = witness_from_json(j);
        const double gap = witness_gap(f, w);
        const double err = std::fabs(gap - w.gap_min_eigenvalue);
        const bool same = err <= 1e-9 * std::max(1.0, std::fabs(w.gap_min_eigenvalue));
        ok = ok && same;
        std::printf("%s witness: recorded %s, replayed %s (%s)\n", to_string(w.kind), fmt(w.gap_min_eigenvalue).c_str(),
                    fmt(gap).c_str(), same ? "match" : "MISMATCH");
    }
    if (found.empty()) std::printf("no witnesses in report\n");
    return ok ? kExitPass : kExitDisagree;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MATCONVEX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::fprintf(stderr, "warning: ignoring malformed MATCONVEX_SEED\n");
        }
    }
    return 1;
}

void add_common(CLI::App* sub, Common& c, bool csv) {
    sub->add_option("--json", c.json_path, "write the JSON report to a file ('-' for stdout)");
    if (csv) sub->add_option("--csv", c.csv_path, "write tabular data as CSV ('-' for stdout)");
    sub->add_option("--seed", c.seed, "random seed (default $MATCONVEX_SEED or 1)");
    sub->add_option("--tol", c.tol, "base PSD tolerance")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide, certify and refute matrix monotonicity and convexity of order n"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Common common;
    common.seed = default_seed();

    std::string fn, kind = "convex", window, interval = "-1,1", target = "convex-monotone", report_path;
    int n = 2, m = 4, degree = 3, grid = kDefaultGridSize, trials = 1000, node_sets = 20, steps = 20, points = 65, budget = kConstructBudget;
    int power_points = 7, gap_trials = GapSearchOptions{}.definitional_trials;
    double p = 0.5, t_lo = 0.5, t_hi = 2.0, tol_scale = 1.0, max_seconds = 90.0;

    auto* classify_cmd = app.add_subcommand("classify", "run all three criteria on a function");
    classify_cmd->add_option("function", fn, "e.g. \"x^0.5 on (0,inf)\"")->required();
    classify_cmd->add_option("--n", n, "matrix order")->check(CLI::Range(1, 8));
    classify_cmd->add_option("--kind", kind)->check(CLI::IsMember({"monotone", "convex", "concave"}));
    classify_cmd->add_option("--grid", grid, "derivative grid size")->check(CLI::Range(16, 100000));
    classify_cmd->add_option("--trials", trials, "definitional trials")->check(CLI::PositiveNumber);
    classify_cmd->add_option("--node-sets", node_sets, "divided-difference node sets")->check(CLI::PositiveNumber);
    classify_cmd->add_option("--window", window, "sampling window a,b for unbounded domains");
    add_common(classify_cmd, common, true);

    auto* power_cmd = app.add_subcommand("power", "classify t^p for 2-monotonicity and 2-convexity");
    power_cmd->add_option("p", p, "exponent")->required();
    power_cmd->add_option("--t-lo", t_lo)->check(CLI::PositiveNumber);
    power_cmd->add_option("--t-hi", t_hi)->check(CLI::PositiveNumber);
    power_cmd->add_option("--points", power_points, "determinant table size")->check(CLI::Range(1, 10000));
    power_cmd->add_option("--grid", grid)->check(CLI::Range(16, 100000));
    add_common(power_cmd, common, true);

    auto* scan_cmd = app.add_subcommand("scan-line", "search the real line for an order-2 witness");
    scan_cmd->add_option("function", fn)->required();
    scan_cmd->add_option("--kind", kind)->check(CLI::IsMember({"monotone", "convex"}));
    scan_cmd->add_option("--steps", steps, "radius doublings")->check(CLI::Range(0, 60));
    scan_cmd->add_option("--points", points, "points per radius")->check(CLI::Range(2, 100000));
    add_common(scan_cmd, common, true);

    auto* construct_cmd = app.add_subcommand("construct", "build a strict polynomial of prescribed degree");
    construct_cmd->add_option("--n", n);
    construct_cmd->add_option("--m", m, "degree");
    construct_cmd->add_option("--interval", interval, "a,b");
    construct_cmd->add_option("--target", target)->check(CLI::IsMember({"convex-monotone", "concave-monotone"}));
    construct_cmd->add_option("--budget", budget)->check(CLI::PositiveNumber);
    add_common(construct_cmd, common, false);

    auto* gap_cmd = app.add_subcommand("gap-search", "find a polynomial that is n-convex but not (n+1)-convex");
    gap_cmd->add_option("--n", n);
    gap_cmd->add_option("--degree", degree);
    gap_cmd->add_option("--interval", interval, "a,b");
    gap_cmd->add_option("--trials", gap_trials, "definitional trials per check")->check(CLI::PositiveNumber);
    gap_cmd->add_option("--max-seconds", max_seconds)->check(CLI::PositiveNumber);
    add_common(gap_cmd, common, false);

    auto* selftest_cmd = app.add_subcommand("selftest", "run the bundled acceptance suite");
    selftest_cmd->add_option("--tol-scale", tol_scale, "multiplies every pinned tolerance");
    add_common(selftest_cmd, common, false);

    auto* replay_cmd = app.add_subcommand("replay", "recompute the witnesses stored in a JSON report");
    replay_cmd->add_option("report", report_path)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*classify_cmd) return cmd_classify(fn, n, kind, grid, trials, node_sets, window, common);
        if (*power_cmd) return cmd_power(p, t_lo, t_hi, power_points, grid, common);
        if (*scan_cmd) return cmd_scan_line(fn, kind, steps, points, common);
        if (*construct_cmd) return cmd_construct(n, m, interval, target, budget, common);
        if (*gap_cmd) return cmd_gap_search(n, degree, interval, gap_trials, max_seconds, common);
        if (*selftest_cmd) return cmd_selftest(tol_scale, common);
        if (*replay_cmd) return cmd_replay(report_path);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: malformed report: %s\n", e.what());
        return kExitInputError;
    }
    return kExitInputError;
}
