// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "matconvex/parse.hpp"
#include "matconvex/report.hpp"

using namespace matconvex;

TEST(Number, NonFiniteAsStrings) {
    EXPECT_EQ(number(kInf), Json("inf"));
    EXPECT_EQ(number(-kInf), Json("-inf"));
    EXPECT_EQ(number(std::nan("")), Json("nan"));
    EXPECT_EQ(number(1.5), Json(1.5));
    EXPECT_EQ(number_from(number(kInf)), kInf);
    EXPECT_EQ(number_from(number(-kInf)), -kInf);
    EXPECT_TRUE(std::isnan(number_from(number(std::nan("")))));
    EXPECT_EQ(number_from(number(-0.25)), -0.25);
    EXPECT_EQ(numbers({1.0, kInf}).dump(), "[1.0,\"inf\"]");
}

TEST(Report, JsonRoundTrip) {
    Report r;
    r.command = "classify";
    r.function = "x^0.5";
    r.interval = "(0,inf)";
    r.n = 3;
    r.kind = "monotone";
    r.seed = 18446744073709551615ULL;
    r.verdicts = Json{{"derivative", "PASS"}};
    r.details = Json{{"x", Json::array({1, 2})}};
    r.exit_code = 1;
    r.wall_time_s = 0.125;
    const Json j = r;
    EXPECT_EQ(j.at("schema"), 1);
    EXPECT_EQ(j.begin().key(), "schema");
    EXPECT_EQ(Json::parse(j.dump()).get<Report>(), r);
}

TEST(Report, DeterministicDumpDropsWallTime) {
    Report a, b;
    a.command = b.command = "selftest";
    a.wall_time_s = 1.0;
    b.wall_time_s = 2.0;
    EXPECT_EQ(deterministic_dump(a), deterministic_dump(b));
    EXPECT_EQ(deterministic_dump(a).find("wall_time_s"), std::string::npos);
}

TEST(Report, WitnessRoundTrip) {
    const auto f = parse("x^3 on (0,2)");
    const auto res = definitional_test(f, 2, MatrixKind::Convex, 500, 3);
    ASSERT_TRUE(res.witness.has_value());
    const Json j = Json::parse(to_json(*res.witness).dump());
    const Witness w = witness_from_json(j);
    EXPECT_EQ(w.a, res.witness->a);
    EXPECT_EQ(w.b, res.witness->b);
    EXPECT_EQ(w.lambda, res.witness->lambda);
    EXPECT_EQ(w.seed, res.witness->seed);
    EXPECT_EQ(w.trial, res.witness->trial);
    EXPECT_EQ(w.kind, WitnessKind::Convexity);
    EXPECT_NEAR(witness_gap(f, w), res.witness->gap_min_eigenvalue, 1e-12);
}

TEST(Report, ComplexMatrixRoundTrip) {
    CMatrix m(2);
    m(0, 0) = 2.0;
    m(0, 1) = Complex(0.0, 1.0);
    m(1, 0) = Complex(0.0, -1.0);
    m(1, 1) = -0.5;
    EXPECT_EQ(cmatrix_from_json(Json::parse(matrix_json(m).dump())), m);
}

TEST(MakeReport, ExitCodes) {
    const auto sqrt = classify(parse("x^0.5 on (0,inf)"), 2, PropertyKind::Monotone);
    EXPECT_TRUE(sqrt.consistent());
    const auto r = make_report("classify", sqrt, 1);
    EXPECT_EQ(r.exit_code, kExitPass);
    EXPECT_EQ(r.function, "x^0.5");
    EXPECT_EQ(r.interval, "(0, inf)");
    EXPECT_EQ(r.verdicts.at("derivative"), "PASS");
    EXPECT_EQ(r.verdicts.at("consistent"), true);

    const auto cube = classify(parse("x^3 on (0,inf)"), 2, PropertyKind::Convex);
    const auto rc = make_report("classify", cube, 1);
    EXPECT_EQ(rc.exit_code, kExitRefuted);
    EXPECT_EQ(rc.verdicts.at("definitional"), "REFUTED");
    EXPECT_TRUE(rc.details.at("definitional").contains("witness"));
}

TEST(MakeReport, ConcaveTestsNegation) {
    const auto c = classify(parse("log(x) on (0,inf)"), 2, PropertyKind::Concave);
    EXPECT_EQ(c.exit_code(), kExitPass);
    EXPECT_EQ(c.function.label, "-(log(x))");
    EXPECT_EQ(make_report("classify", c, 1).kind, "concave");
}

TEST(MakeReport, DisagreementIsExitTwo) {
    Classification c;
    c.derivative.pass = false;
    c.definitional.refuted = false;
    c.divided.refuted = true;
    EXPECT_FALSE(c.consistent());
    EXPECT_EQ(c.exit_code(), kExitDisagree);
}

TEST(PowerReport, Json) {
    const auto r = power_report(0.5, {0.5, 1.0, 2.0});
    EXPECT_TRUE(r.closed_form_consistent());
    EXPECT_TRUE(r.grid_consistent());
    EXPECT_LT(r.max_relative_error, 1e-10);
    const Json j = to_json(r);
    EXPECT_EQ(j.at("rows").size(), 3u);
    EXPECT_EQ(j.at("is_2monotone"), true);
    EXPECT_EQ(j.at("is_2convex"), false);
}
