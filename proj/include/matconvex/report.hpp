// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "matconvex/calculus.hpp"
#include "matconvex/classify.hpp"
#include "matconvex/criteria.hpp"
#include "matconvex/polynomial.hpp"

namespace matconvex {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Machine-readable record of one command run. Everything except
/// `wall_time_s` is a deterministic function of the command and seed.
struct Report {
    int schema = kSchemaVersion;
    std::string tool_version = kToolVersion;
    std::string command;
    std::string function;
    std::string interval;
    int n = 0;
    std::string kind;
    std::uint64_t seed = 0;
    Json verdicts = Json::object();
    Json details = Json::object();
    int exit_code = 0;
    double wall_time_s = 0.0;

    friend bool operator==(const Report&, const Report&) = default;
};

inline void to_json(Json& j, const Report& r) {
    j = Json{{"schema", r.schema},     {"tool_version", r.tool_version}, {"command", r.command},
             {"function", r.function}, {"interval", r.interval},         {"n", r.n},
             {"kind", r.kind},         {"seed", r.seed},                 {"verdicts", r.verdicts},
             {"details", r.details},   {"exit_code", r.exit_code},       {"wall_time_s", r.wall_time_s}};
}

inline void from_json(const Json& j, Report& r) {
    j.at("schema").get_to(r.schema);
    j.at("tool_version").get_to(r.tool_version);
    j.at("command").get_to(r.command);
    j.at("function").get_to(r.function);
    j.at("interval").get_to(r.interval);
    j.at("n").get_to(r.n);
    j.at("kind").get_to(r.kind);
    j.at("seed").get_to(r.seed);
    r.verdicts = j.at("verdicts");
    r.details = j.at("details");
    j.at("exit_code").get_to(r.exit_code);
    j.at("wall_time_s").get_to(r.wall_time_s);
}

/// JSON text with the wall-time field removed, for byte comparisons.
inline std::string deterministic_dump(const Report& r) {
    Json j = r;
    j.erase("wall_time_s");
    return j.dump(2);
}

// Non-finite doubles have no JSON representation; they are written as the
// strings "inf", "-inf" or "nan".
inline Json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

inline double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return std::nan("");
}

inline Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

inline Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(number(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

/// Row-major array of [re, im] pairs.
inline Json matrix_json(const CMatrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

inline CMatrix cmatrix_from_json(const Json& j) {
    CMatrix m(static_cast<int>(j.size()));
    for (int i = 0; i < m.size(); ++i)
        for (int k = 0; k < m.size(); ++k) m(i, k) = Complex(j[i][k][0].get<double>(), j[i][k][1].get<double>());
    return m;
}

inline Json to_json(const PsdVerdict& v) {
    return Json{{"classification", to_string(v.classification)},
                {"min_eigenvalue", number(v.min_eigenvalue)},
                {"minors", numbers(v.minors)},
                {"tolerance", number(v.tolerance)}};
}

inline Json to_json(const GridReport& r) {
    Json j{{"kind", to_string(r.kind)},
           {"n", r.n},
           {"verdict", r.pass ? "PASS" : "FAIL"},
           {"points", r.point_count},
           {"indefinite_points", r.indefinite_count},
           {"worst_point", number(r.worst.t)},
           {"worst", to_json(r.worst.verdict)}};
    if (r.first_failure) j["first_failure"] = number(*r.first_failure);
    return j;
}

inline Json to_json(const Witness& w) {
    return Json{{"kind", to_string(w.kind)},        {"seed", w.seed},
                {"trial", w.trial},                 {"lambda", w.lambda},
                {"gap_min_eigenvalue", w.gap_min_eigenvalue}, {"A", matrix_json(w.a.matrix())},
                {"B", matrix_json(w.b.matrix())}};
}

inline Witness witness_from_json(const Json& j) {
    Witness w;
    w.kind = j.at("kind").get<std::string>() == "convexity" ? WitnessKind::Convexity : WitnessKind::Monotonicity;
    w.seed = j.at("seed").get<std::uint64_t>();
    w.trial = j.at("trial").get<std::uint64_t>();
    w.lambda = j.at("lambda").get<double>();
    w.gap_min_eigenvalue = j.at("gap_min_eigenvalue").get<double>();
    w.a = HermitianMatrix(cmatrix_from_json(j.at("A")));
    w.b = HermitianMatrix(cmatrix_from_json(j.at("B")));
    return w;
}

inline Json to_json(const DefinitionalResult& r) {
    Json j{{"verdict", r.refuted ? "REFUTED" : "UNREFUTED"},
           {"trials", r.trials},
           {"worst_min_eigenvalue", number(r.worst_min_eigenvalue)}};
    if (r.witness) j["witness"] = to_json(*r.witness);
    return j;
}

inline Json to_json(const DividedDifferenceReport& r) {
    Json worst{{"points", numbers(r.worst.matrix.points)},
               {"matrix", matrix_json(r.worst.matrix.entries)},
               {"verdict", to_json(r.worst.verdict)}};
    if (r.worst.matrix.anchor) worst["anchor"] = number(*r.worst.matrix.anchor);
    return Json{{"verdict", r.refuted ? "REFUTED" : "UNREFUTED"}, {"node_sets", r.sets}, {"worst", worst}};
}

inline Json to_json(const PerturbationCertificate& c) {
    Json samples = Json::array();
    for (const auto& s : c.epsilon_samples) samples.push_back(Json{{"epsilon", s.epsilon}, {"minors", numbers(s.minors)}});
    return Json{{"t0", c.t0},
                {"n", c.n},
                {"eta", c.eta},
                {"eta_per_minor", numbers(c.eta_per_minor)},
                {"valid", c.valid()},
                {"limit", to_json(c.limit_verdict)},
                {"epsilon_samples", samples}};
}

inline Json to_json(const Polynomial& p) {
    return Json{{"coefficients", numbers(p.coeffs)}, {"degree", p.degree()}, {"interval", to_string(p.interval)}};
}

inline Json to_json(const GapCertificate& c) {
    return Json{{"polynomial", to_json(c.polynomial)},
                {"n", c.n},
                {"seed", c.seed},
                {"pass_grid", to_json(c.pass_grid)},
                {"pass_definitional", to_json(c.pass_definitional)},
                {"fail_point", Json{{"t", c.fail_point.t}, {"verdict", to_json(c.fail_point.verdict)}}},
                {"fail_witness", to_json(c.fail_witness)}};
}

inline Json to_json(const RigidityScan& s) {
    Json rows = Json::array();
    for (const auto& r : s.rows) rows.push_back(Json{{"radius", r.radius}, {"worst_minor", number(r.worst_minor)}});
    Json j{{"kind", to_string(s.kind)}, {"rows", rows}};
    if (s.witness)
        j["witness"] = Json{{"t", s.witness->t}, {"radius", s.witness->radius}, {"verdict", to_json(s.witness->verdict)}};
    else
        j["witness"] = nullptr;
    return j;
}

inline Json to_json(const PowerReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"t", row.t},
                            {"monotone_det_closed", number(row.monotone_closed)},
                            {"monotone_det_jet", number(row.monotone_jet)},
                            {"convex_det_closed", number(row.convex_closed)},
                            {"convex_det_jet", number(row.convex_jet)}});
    return Json{{"p", r.verdict.p},
                {"is_2monotone", r.verdict.is_2monotone},
                {"is_2convex", r.verdict.is_2convex},
                {"grid_monotone_pass", r.grid_monotone_pass},
                {"grid_convex_pass", r.grid_convex_pass},
                {"closed_form_consistent", r.closed_form_consistent()},
                {"max_relative_error", r.max_relative_error},
                {"rows", rows}};
}

inline Report make_report(const std::string& command, const Classification& c, std::uint64_t seed) {
    Report r;
    r.command = command;
    r.function = c.function.label;
    r.interval = to_string(c.function.domain);
    r.n = c.n;
    r.kind = to_string(c.kind);
    r.seed = seed;
    auto verdict = [](bool refuted) { return refuted ? "REFUTED" : "PASS"; };
    r.verdicts = Json{{"derivative", verdict(!c.derivative.pass)},
                      {"definitional", verdict(c.definitional.refuted)},
                      {"divided_difference", verdict(c.divided.refuted)},
                      {"consistent", c.consistent()}};
    r.details = Json{{"derivative", to_json(c.derivative)},
                     {"definitional", to_json(c.definitional)},
                     {"divided_difference", to_json(c.divided)}};
    r.exit_code = c.exit_code();
    return r;
}

}  // namespace matconvex
