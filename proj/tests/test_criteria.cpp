// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "matconvex/criteria.hpp"
#include "matconvex/parse.hpp"
#include "matconvex/polynomial.hpp"

using namespace matconvex;

namespace {

void expect_matrix(const Matrix& m, const Matrix& want, double tol) {
    ASSERT_EQ(m.size(), want.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) EXPECT_NEAR(m(i, j), want(i, j), tol) << i << "," << j;
}

FunctionSpec strict_convex_perturber() {
    return as_function(construct_strict_polynomial(2, 4, Interval(-1.0, 1.0), StrictTarget::ConvexMonotone));
}

}  // namespace

TEST(Kraus, Cube) {
    const auto f = parse("x^3");
    for (double t : {-1.5, 0.0, 0.7, 2.0}) {
        const auto k = kraus_matrix(f, t, 2);
        EXPECT_EQ(k.kind, MatrixKind::Convex);
        EXPECT_EQ(k.base_point, t);
        expect_matrix(k.entries, Matrix{{3 * t, 1.0}, {1.0, 0.0}}, 1e-14);
    }
    // Finite-difference cross-check of a_2 = f''/2 and a_3 = f'''/6 at t = 1.
    const auto k = kraus_matrix(f, 1.0, 2).entries;
    EXPECT_NEAR(k(0, 0), finite_difference_oracle(f, 1.0, 2, 1e-2) / 2, 1e-9);
    EXPECT_NEAR(k(0, 1), finite_difference_oracle(f, 1.0, 3, 1e-2) / 6, 1e-9);
}

TEST(Kraus, SquareAndExp) {
    expect_matrix(kraus_matrix(parse("x^2"), 0.3, 2).entries, Matrix{{1.0, 0.0}, {0.0, 0.0}}, 0.0);
    expect_matrix(kraus_matrix(parse("exp(x)"), 0.0, 2).entries, Matrix{{0.5, 1.0 / 6}, {1.0 / 6, 1.0 / 24}}, 1e-16);
}

TEST(Dobsch, Examples) {
    expect_matrix(dobsch_matrix(parse("x^0.5 on (0,inf)"), 1.0, 2).entries, Matrix{{0.5, -0.125}, {-0.125, 0.0625}}, 1e-16);
    expect_matrix(dobsch_matrix(parse("x"), 4.0, 2).entries, Matrix{{1.0, 0.0}, {0.0, 0.0}}, 0.0);
    const auto d = dobsch_matrix(parse("x^3"), 1.0, 2).entries;
    expect_matrix(d, Matrix{{3.0, 3.0}, {3.0, 1.0}}, 0.0);
    EXPECT_NEAR(determinant(d), -6.0, 1e-14);
}

TEST(Hankel, EntriesAreJetCoefficients) {
    const auto f = parse("log(1+x) * exp(x) on (-1,inf)");
    const auto j = jet_lift(f, 0.4, 8);
    for (int n = 1; n <= 4; ++n) {
        const auto k = kraus_matrix(f, 0.4, n).entries;
        const auto d = dobsch_matrix(f, 0.4, n).entries;
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < n; ++c) {
                EXPECT_EQ(k(i, c), j[i + c + 2]);
                EXPECT_EQ(d(i, c), j[i + c + 1]);
            }
    }
}

TEST(Strict, Examples) {
    const auto sqrt = parse("x^0.5 on (0,inf)");
    EXPECT_TRUE(strict_check(sqrt, 1.0, 2, MatrixKind::Monotone));
    EXPECT_NEAR(strict_determinant(sqrt, 1.0, 2, MatrixKind::Monotone), 0.015625, 1e-16);
    EXPECT_NEAR(strict_determinant(sqrt, 1.0, 2, MatrixKind::Monotone), power_monotone_det(0.5, 1.0), 1e-12);
    EXPECT_FALSE(strict_check(parse("x"), 1.0, 2, MatrixKind::Monotone));
    EXPECT_FALSE(strict_check(parse("x^2"), 1.0, 2, MatrixKind::Convex));
}

TEST(ClosedForms, Examples) {
    EXPECT_DOUBLE_EQ(power_monotone_det(0.5, 1.0), 1.0 / 64);
    EXPECT_EQ(power_monotone_det(1.0, 3.7), 0.0);
    EXPECT_DOUBLE_EQ(power_monotone_det(2.0, 1.0), -1.0);
    EXPECT_DOUBLE_EQ(power_convex_det(3.0, 1.0), -1.0);
    EXPECT_DOUBLE_EQ(power_convex_det(3.0, 1.0), determinant(kraus_matrix(parse("x^3"), 1.0, 2).entries));
    EXPECT_EQ(power_convex_det(2.0, 0.4), 0.0);
    EXPECT_EQ(power_convex_det(-1.0, 0.4), 0.0);
}

TEST(ClosedForms, MatchJetDeterminants) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> p_dist(-2.0, 3.0), t_dist(0.5, 2.0);
    for (int i = 0; i < 50; ++i) {
        const double p = p_dist(rng), t = t_dist(rng);
        const auto f = power_function(p);
        const double m = power_monotone_det(p, t), c = power_convex_det(p, t);
        EXPECT_NEAR(determinant(dobsch_matrix(f, t, 2).entries), m, 1e-9 * std::max(1.0, std::fabs(m)));
        EXPECT_NEAR(determinant(kraus_matrix(f, t, 2).entries), c, 1e-9 * std::max(1.0, std::fabs(c)));
    }
}

TEST(ClassifyPower, Boundaries) {
    const auto half = classify_power(0.5);
    EXPECT_TRUE(half.is_2monotone);
    EXPECT_FALSE(half.is_2convex);
    const auto three_halves = classify_power(1.5);
    EXPECT_FALSE(three_halves.is_2monotone);
    EXPECT_TRUE(three_halves.is_2convex);
    const auto three = classify_power(3.0);
    EXPECT_FALSE(three.is_2monotone);
    EXPECT_FALSE(three.is_2convex);
    for (double p : {-1.0, -0.5, 0.0}) EXPECT_TRUE(classify_power(p).is_2convex) << p;
    for (double p : {-1.5, 0.25, 2.5}) EXPECT_FALSE(classify_power(p).is_2convex) << p;
    for (double p : {0.0, 1.0}) EXPECT_TRUE(classify_power(p).is_2monotone) << p;
}

TEST(ClassifyPower, AgreesWithGrid) {
    for (double p : {-1.5, -1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const auto v = classify_power(p);
        const auto f = power_function(p, Interval(0.5, 2.0));
        EXPECT_EQ(grid_classify(f, 2, MatrixKind::Monotone).pass, v.is_2monotone) << p;
        EXPECT_EQ(grid_classify(f, 2, MatrixKind::Convex).pass, v.is_2convex) << p;
        if (v.is_2monotone) {
            EXPECT_GE(power_monotone_det(p, 1.0), -kPsdTolerance);
        }
        if (v.is_2convex) {
            EXPECT_GE(power_convex_det(p, 1.0), -kPsdTolerance);
        }
    }
}

TEST(Grid, Examples) {
    EXPECT_TRUE(grid_classify(parse("x^0.5 on (0.1,10)"), 2, MatrixKind::Monotone).pass);
    const auto cube = grid_classify(parse("x^3 on (0.1,10)"), 2, MatrixKind::Convex);
    EXPECT_FALSE(cube.pass);
    EXPECT_EQ(cube.indefinite_count, cube.point_count);
    EXPECT_EQ(cube.point_count, kDefaultGridSize);
    for (auto kind : {MatrixKind::Monotone, MatrixKind::Convex}) {
        const auto affine = grid_classify(parse("2 + 3*x on (-5,5)"), 3, kind);
        EXPECT_TRUE(affine.pass);
        EXPECT_EQ(affine.worst.verdict.classification, PsdClass::BoundaryPSD);
    }
    EXPECT_THROW(grid_classify(parse("x"), 2, MatrixKind::Convex, 15), PreconditionError);
    EXPECT_THROW(grid_classify(parse("log(x) on (-1,1)"), 2, MatrixKind::Convex), DomainError);
}

TEST(Grid, AffineInvariance) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> a_dist(0.0, 5.0), b_dist(-5.0, 5.0);
    for (const char* text : {"x^0.5 on (0.1,4)", "x^3 on (0.1,4)", "log(x) on (0.1,4)", "exp(x) on (0.1,4)"}) {
        const auto f = parse(text);
        for (int i = 0; i < 5; ++i) {
            const double a = a_dist(rng), b = b_dist(rng);
            const FunctionSpec g(expr::sum({expr::product({expr::constant(a), f.expr}), expr::constant(b)}), f.domain);
            for (auto kind : {MatrixKind::Monotone, MatrixKind::Convex})
                EXPECT_EQ(grid_classify(g, 2, kind).pass, grid_classify(f, 2, kind).pass) << text << " a=" << a;
        }
    }
}

TEST(Kraus, ScaleCovariance) {
    // K_n(f(s.); t0) = D K_n(f; s t0) D with D = diag(s^1..s^n).
    const auto f = parse("log(1+x) on (-1,inf)");
    for (double s : {0.5, 2.0, 3.0})
        for (int n = 2; n <= 4; ++n) {
            const double t0 = 0.3;
            const FunctionSpec fs(expr::log(expr::polynomial({1.0, s})), Interval(-1.0 / s, kInf));
            const auto lhs = kraus_matrix(fs, t0, n).entries;
            const auto rhs = kraus_matrix(f, s * t0, n).entries;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    EXPECT_NEAR(lhs(i, j), std::pow(s, i + 1) * rhs(i, j) * std::pow(s, j + 1), 1e-10);
        }
}

TEST(Perturbation, SquareAtZero) {
    const auto cert = perturbation_certificate(parse("x^2"), strict_convex_perturber(), 0.0, 2);
    EXPECT_GT(cert.eta, 0.0);
    EXPECT_TRUE(cert.valid());
    EXPECT_EQ(cert.limit_verdict.classification, PsdClass::BoundaryPSD);
    EXPECT_EQ(cert.epsilon_samples.size(), 41u);
    for (const auto& s : cert.epsilon_samples) {
        if (s.epsilon > cert.eta) continue;
        for (double d : s.minors) EXPECT_GT(d, 0.0);
    }
}

TEST(Perturbation, StrictFunctionPerturbedByItself) {
    const auto g = strict_convex_perturber();
    const auto cert = perturbation_certificate(g, g, 0.0, 2);
    EXPECT_EQ(cert.eta, 1.0);
    EXPECT_EQ(cert.limit_verdict.classification, PsdClass::PositiveDefinite);
}

TEST(Perturbation, Errors) {
    const auto g = strict_convex_perturber();
    EXPECT_THROW(perturbation_certificate(parse("x^3"), g, 0.5, 2), NoPositiveWindow);
    EXPECT_THROW(perturbation_certificate(parse("x^2"), parse("x^2"), 0.0, 2), InvalidPerturber);
    EXPECT_THROW(perturbation_certificate(parse("x^2"), parse("x^3"), 1.0, 2), InvalidPerturber);
}

TEST(Representation, Examples) {
    EXPECT_TRUE(representation_concavity(parse("x^0.5 on (0.25,4)"), RepresentationKind::MonotoneRep).concave);
    const auto cube = representation_concavity(parse("x^3 on (0.5,2)"), RepresentationKind::MonotoneRep);
    EXPECT_FALSE(cube.concave);
    EXPECT_GT(cube.worst_second_derivative, 0.0);
    EXPECT_FALSE(representation_concavity(parse("x^2 on (1,2)"), RepresentationKind::MonotoneRep).concave);
}

TEST(Representation, FormulaAndPositivity) {
    // c(t) = p^(-1/2) t^((1-p)/2) for t^p.
    const RepresentationFunction c{RepresentationKind::MonotoneRep, parse("x^0.5 on (0,inf)")};
    EXPECT_NEAR(c.value(2.0), std::pow(0.5, -0.5) * std::pow(2.0, 0.25), 1e-14);
    // d(t) = (p(p-1))^(-1/3) t^((2-p)/3).
    const RepresentationFunction d{RepresentationKind::ConvexRep, parse("x^1.5 on (0,inf)")};
    EXPECT_NEAR(d.value(2.0), std::pow(0.75, -1.0 / 3) * std::pow(2.0, 0.5 / 3), 1e-14);
    try {
        representation_concavity(parse("x^2 on (-1,1)"), RepresentationKind::MonotoneRep);
        FAIL() << "expected PositivityError";
    } catch (const PositivityError& e) {
        EXPECT_LE(e.point(), 0.0);
    }
}

TEST(SignPattern, Examples) {
    const std::vector<double> ts{0.5, 1.0, 2.0};
    const auto a = sign_pattern_check(parse("-1/x on (0,inf)"), 2, MatrixKind::Monotone, ts);
    EXPECT_TRUE(a.pass);
    ASSERT_EQ(a.checks.size(), 9u);
    // f' = t^-2, f'' = -2 t^-3, f''' = 6 t^-4 at t = 0.5
    EXPECT_NEAR(a.checks[0].value, 4.0, 1e-13);
    EXPECT_NEAR(a.checks[1].value, -16.0, 1e-13);
    EXPECT_NEAR(a.checks[2].value, 96.0, 1e-12);

    const auto b = sign_pattern_check(parse("x^2 on (0,inf)"), 2, MatrixKind::Monotone, ts);
    EXPECT_FALSE(b.pass);
    ASSERT_TRUE(b.first_failure.has_value());
    EXPECT_EQ(b.first_failure->k, 1);

    EXPECT_TRUE(sign_pattern_check(parse("x - log(1+x) on (0,inf)"), 2, MatrixKind::Convex, ts).pass);
    EXPECT_THROW(sign_pattern_check(parse("x on (0,1)"), 2, MatrixKind::Monotone, ts), HypothesisError);
    EXPECT_THROW(sign_pattern_check(parse("x"), 2, MatrixKind::Monotone, ts), HypothesisError);
}

TEST(SignPattern, OperatorMonotoneSuite) {
    for (const char* text : {"-1/x on (0,inf)", "log(1+x) on (0,inf)", "x^0.5 on (0,inf)", "x/(1+x) on (0,inf)"}) {
        const auto f = parse(text);
        for (int n : {2, 3}) {
            const auto r = sign_pattern_check(f, n, MatrixKind::Monotone, default_sign_samples(f));
            EXPECT_TRUE(r.pass) << text << " n=" << n;
            EXPECT_EQ(r.checks.size(), static_cast<std::size_t>(100 * (2 * n - 1)));
        }
    }
}

TEST(Rigidity, Examples) {
    const auto e = whole_line_rigidity_scan(parse("exp(x)"), MatrixKind::Convex);
    ASSERT_TRUE(e.witness.has_value());
    EXPECT_LE(e.witness->radius, 1.0);
    const double t = e.witness->t;
    EXPECT_NEAR(e.witness->verdict.minors[1], -std::exp(2 * t) / 144, 1e-12);

    EXPECT_FALSE(whole_line_rigidity_scan(parse("poly[1,2]"), MatrixKind::Monotone).witness.has_value());
    const auto q = whole_line_rigidity_scan(parse("x^2"), MatrixKind::Convex);
    EXPECT_FALSE(q.witness.has_value());
    EXPECT_EQ(q.rows.size(), 21u);
    EXPECT_TRUE(whole_line_rigidity_scan(parse("x^3"), MatrixKind::Monotone).witness.has_value());
    EXPECT_THROW(whole_line_rigidity_scan(parse("x on (0,1)"), MatrixKind::Convex), HypothesisError);
}

TEST(Antiderivative, Examples) {
    EXPECT_TRUE(antiderivative_convexity(parse("x/(1+x) on (0,10)")).pass);
    EXPECT_TRUE(antiderivative_convexity(parse("1 + 0*x on (0,10)")).pass);
    EXPECT_TRUE(antiderivative_convexity(parse("x^0.5 on (0.1,9)")).pass);
    EXPECT_THROW(antiderivative_convexity(parse("x^3 on (0.1,2)")), NotMonotone);
}

TEST(Negated, FlipsConvexity) {
    const auto f = negated(parse("log(x) on (0.1,4)"));
    EXPECT_EQ(f.label, "-(log(x))");
    EXPECT_TRUE(grid_classify(f, 2, MatrixKind::Convex).pass);
    EXPECT_FALSE(grid_classify(parse("log(x) on (0.1,4)"), 2, MatrixKind::Convex).pass);
}
