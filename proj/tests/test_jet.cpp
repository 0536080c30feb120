// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "matconvex/jet.hpp"
#include "matconvex/parse.hpp"

using namespace matconvex;

namespace {

void expect_coeffs(const Jet& j, const std::vector<double>& want, double tol) {
    ASSERT_EQ(j.coeffs.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(j[k], want[k], tol) << "k=" << k;
}

// Generalised binomial coefficient C(p, k): the Taylor coefficients of t^p at 1.
double binom(double p, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= (p - i) / (i + 1);
    return c;
}

}  // namespace

TEST(JetLift, Exp) { expect_coeffs(jet_lift(parse("exp(x)"), 0.0, 4), {1, 1, 0.5, 1.0 / 6, 1.0 / 24}, 1e-15); }

TEST(JetLift, CubeIsExact) {
    const auto j = jet_lift(parse("x^3"), 1.0, 4);
    EXPECT_EQ(j.coeffs, (std::vector<double>{1, 3, 3, 1, 0}));
}

TEST(JetLift, SqrtAgainstFiniteDifferences) {
    const auto f = parse("x^0.5 on (0,inf)");
    const auto j = jet_lift(f, 1.0, 3);
    expect_coeffs(j, {1, 0.5, -0.125, 0.0625}, 1e-15);
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(j[k] * factorial(k), finite_difference_oracle(f, 1.0, k, 1e-3), 1e-8);
}

TEST(JetLift, PowersMatchBinomialSeries) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> p_dist(-2.5, 3.5);
    for (int i = 0; i < 50; ++i) {
        const double p = p_dist(rng);
        const FunctionSpec f(expr::power(expr::variable(), p), Interval::half_line(0.0));
        const auto j = jet_lift(f, 1.0, 10);
        for (int k = 0; k <= 10; ++k) EXPECT_NEAR(j[k], binom(p, k), 1e-12 * std::max(1.0, std::fabs(binom(p, k))));
    }
}

TEST(JetLift, LogAndReciprocal) {
    // log(1+x) at 0: (-1)^(k+1)/k; 1/(1+x) at 0: (-1)^k.
    const auto l = jet_lift(parse("log(1+x) on (-1,inf)"), 0.0, 8);
    const auto r = jet_lift(parse("1/(1+x) on (-1,inf)"), 0.0, 8);
    EXPECT_EQ(l[0], 0.0);
    for (int k = 1; k <= 8; ++k) EXPECT_NEAR(l[k], (k % 2 ? 1.0 : -1.0) / k, 1e-15);
    for (int k = 0; k <= 8; ++k) EXPECT_NEAR(r[k], k % 2 ? -1.0 : 1.0, 1e-15);
}

TEST(JetLift, PolynomialCoefficientsVanishAboveDegree) {
    const auto j = jet_lift(parse("poly[1,-2,0.5,3]"), 0.7, 12);
    for (int k = 4; k <= 12; ++k) EXPECT_EQ(j[k], 0.0);
    EXPECT_NEAR(j[3], 3.0, 1e-15);
}

TEST(JetLift, Errors) {
    EXPECT_THROW(jet_lift(parse("exp(x)"), 0.0, 65), OrderCapError);
    EXPECT_NO_THROW(jet_lift(parse("exp(x)"), 0.0, 64));
    EXPECT_THROW(jet_lift(parse("x^0.5 on (0,inf)"), -1.0, 3), DomainError);
    EXPECT_THROW(jet_lift(parse("log(x) on (-1,1)"), -0.5, 2), DomainError);
}

TEST(Derivative, Examples) {
    EXPECT_DOUBLE_EQ(derivative(parse("x^0.5 on (0,inf)"), 1.0, 1), 0.5);
    const auto f = parse("1/x on (0,inf)");
    EXPECT_NEAR(derivative(f, 2.0, 3), -0.375, 1e-15);
    EXPECT_NEAR(finite_difference_oracle(f, 2.0, 3, default_fd_step(3, 2.0)), -0.375, 1e-9);
    const auto g = parse("x - log(1+x) on (-1,inf)");
    EXPECT_DOUBLE_EQ(derivative(g, 0.3, 0), evaluate(g, 0.3));
}

TEST(Derivative, DistinctAnalyticFormula) {
    // d^k/dt^k 1/t = (-1)^k k! t^(-k-1)
    const auto f = parse("1/x on (0,inf)");
    for (int k = 0; k <= 12; ++k)
        for (double t : {0.5, 1.0, 3.0}) {
            const double want = (k % 2 ? -1.0 : 1.0) * factorial(k) * std::pow(t, -k - 1);
            EXPECT_NEAR(derivative(f, t, k), want, 1e-13 * std::fabs(want));
        }
}

TEST(FiniteDifference, Examples) {
    EXPECT_NEAR(finite_difference_oracle(parse("x^2"), 1.0, 2, 1e-3), 2.0, 1e-8);
    EXPECT_NEAR(finite_difference_oracle(parse("exp(x)"), 0.0, 3, 1e-2), 1.0, 1e-4);
    EXPECT_NEAR(finite_difference_oracle(parse("x^0.5 on (0,inf)"), 1.0, 2, 1e-3), -0.25, 1e-6);
}

TEST(FiniteDifference, Preconditions) {
    EXPECT_THROW(finite_difference_oracle(parse("x^2"), 1.0, 7, 1e-3), PreconditionError);
    EXPECT_THROW(finite_difference_oracle(parse("x^2"), 1.0, 2, 0.0), PreconditionError);
    // stencil reach 2h = 0.2 crosses the left endpoint
    EXPECT_THROW(finite_difference_oracle(parse("x^0.5 on (0,inf)"), 0.15, 2, 0.1), DomainError);
}

TEST(JetAlgebra, Linearity) {
    const auto f = parse("x^0.5 on (0,inf)");
    const auto g = parse("log(x) on (0,inf)");
    const double alpha = 1.7, beta = -0.3;
    const FunctionSpec h(expr::sum({expr::product({expr::constant(alpha), f.expr}), expr::product({expr::constant(beta), g.expr})}),
                         Interval::half_line(0.0));
    for (double t : {0.4, 1.0, 2.5}) {
        const auto jf = jet_lift(f, t, 12), jg = jet_lift(g, t, 12), jh = jet_lift(h, t, 12);
        for (int k = 0; k <= 12; ++k) EXPECT_NEAR(jh[k], alpha * jf[k] + beta * jg[k], 1e-13 * std::max(1.0, std::fabs(jh[k])));
    }
}

TEST(JetAlgebra, Leibniz) {
    const auto f = parse("exp(x)");
    const auto g = parse("x/(1+x) on (-1,inf)");
    const FunctionSpec fg(expr::product({f.expr, g.expr}), g.domain);
    for (double t : {-0.5, 0.0, 1.3}) {
        const auto jf = jet_lift(f, t, 10), jg = jet_lift(g, t, 10), jfg = jet_lift(fg, t, 10);
        for (int k = 0; k <= 10; ++k) {
            double conv = 0.0;
            for (int i = 0; i <= k; ++i) conv += jf[i] * jg[k - i];
            EXPECT_NEAR(jfg[k], conv, 1e-13 * std::max(1.0, std::fabs(conv)));
        }
    }
}

TEST(Antiderivative, Examples) {
    const auto one = antiderivative_jet(jet::constant(0.0, 1.0, 3));
    EXPECT_EQ(one.coeffs, (std::vector<double>{0, 1, 0, 0, 0}));
    const auto t = antiderivative_jet(jet::variable(0.0, 2));
    EXPECT_EQ(t.coeffs, (std::vector<double>{0, 0, 0.5, 0}));
    EXPECT_THROW(antiderivative_jet(jet::constant(0.0, 1.0, kMaxJetOrder)), OrderCapError);
}

TEST(Antiderivative, RatioIntegratesToShiftedLog) {
    const auto a = antiderivative_jet(jet_lift(parse("x/(1+x) on (-1,inf)"), 1.0, 3));
    const auto b = jet_lift(parse("x - log(1+x) on (-1,inf)"), 1.0, 4);
    for (int k = 1; k <= 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-15);
}

TEST(Antiderivative, ShiftBackIsExact) {
    const auto j = jet_lift(parse("exp(x) * x^0.5 on (0,inf)"), 0.8, 9);
    const auto g = antiderivative_jet(j);
    const auto back = jet::derivative(g);
    ASSERT_EQ(back.coeffs.size(), j.coeffs.size());
    // (a / m) * m is exact up to one rounding of the division.
    for (int k = 0; k <= 9; ++k) EXPECT_DOUBLE_EQ(back[k], j[k]);
}
