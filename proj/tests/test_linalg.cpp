// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "matconvex/criteria.hpp"
#include "matconvex/linalg.hpp"

using namespace matconvex;

namespace {

// Cofactor expansion: slow but independent of the elimination code.
double cofactor_det(const Matrix& m) {
    const int n = m.size();
    if (n == 1) return m(0, 0);
    double det = 0.0;
    for (int c = 0; c < n; ++c) {
        Matrix minor(n - 1);
        for (int i = 1; i < n; ++i)
            for (int j = 0, jj = 0; j < n; ++j)
                if (j != c) minor(i - 1, jj++) = m(i, j);
        det += (c % 2 ? -1.0 : 1.0) * m(0, c) * cofactor_det(minor);
    }
    return det;
}

Matrix random_symmetric(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    Matrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = g(rng);
    return m;
}

}  // namespace

TEST(Jacobi, TwoByTwoClosedForm) {
    const Matrix m{{2.0, 1.0}, {1.0, -1.0}};
    const auto e = jacobi_eigen(m);
    const double mid = 0.5, rad = std::sqrt(1.5 * 1.5 + 1.0);
    EXPECT_NEAR(e.values[0], mid - rad, 1e-14);
    EXPECT_NEAR(e.values[1], mid + rad, 1e-14);
}

TEST(Jacobi, ReconstructsRandomMatrices) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 8; ++n) {
        const Matrix m = random_symmetric(rng, n);
        const auto e = jacobi_eigen(m);
        for (int i = 1; i < n; ++i) EXPECT_LE(e.values[i - 1], e.values[i]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k) s += e.vectors(i, k) * e.values[k] * e.vectors(j, k);
                EXPECT_NEAR(s, m(i, j), 1e-12);
            }
    }
}

TEST(Determinant, AgreesWithCofactorExpansion) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 6; ++n) {
        const Matrix m = random_symmetric(rng, n);
        EXPECT_NEAR(determinant(m), cofactor_det(m), 1e-12 * std::max(1.0, std::fabs(cofactor_det(m))));
        const auto minors = leading_minors(m);
        ASSERT_EQ(static_cast<int>(minors.size()), n);
        for (int k = 1; k <= n; ++k) {
            const double want = cofactor_det(m.leading(k));
            EXPECT_NEAR(minors[k - 1], want, 1e-10 * std::max(1.0, std::fabs(want)));
        }
    }
}

TEST(LeadingMinors, ZeroPivotFallback) {
    // D_1 = 0 stalls fraction-free elimination; D_2 = -1 and D_3 = -1 remain well defined.
    const Matrix m{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const auto d = leading_minors(m);
    EXPECT_EQ(d[0], 0.0);
    EXPECT_NEAR(d[1], -1.0, 1e-15);
    EXPECT_NEAR(d[2], -1.0, 1e-15);
    const Matrix hankel{{1.0, 0.0}, {0.0, 0.0}};
    EXPECT_EQ(leading_minors(hankel), (std::vector<double>{1.0, 0.0}));
}

TEST(Psd, Examples) {
    const auto a = psd_test(Matrix{{1.0, 0.0}, {0.0, 0.0}});
    EXPECT_EQ(a.classification, PsdClass::BoundaryPSD);
    EXPECT_EQ(a.minors, (std::vector<double>{1.0, 0.0}));
    EXPECT_TRUE(a.passes());

    const auto b = psd_test(Matrix{{3.0, 1.0}, {1.0, 0.0}});
    EXPECT_EQ(b.classification, PsdClass::Indefinite);
    EXPECT_NEAR(b.minors[1], -1.0, 1e-15);

    const auto c = psd_test(Matrix{{0.5, 1.0 / 6}, {1.0 / 6, 1.0 / 24}});
    EXPECT_EQ(c.classification, PsdClass::Indefinite);
    EXPECT_NEAR(c.minors[1], 1.0 / 48 - 1.0 / 36, 1e-16);
    EXPECT_NEAR(c.minors[1], -1.0 / 144, 1e-16);
}

TEST(Psd, ToleranceScalesWithNorm) {
    const auto v = psd_test(Matrix{{1e6, 0.0}, {0.0, -1e-3}});
    EXPECT_DOUBLE_EQ(v.tolerance, 1e-8 * 1e6);
    EXPECT_EQ(v.classification, PsdClass::BoundaryPSD);
    EXPECT_EQ(psd_test(Matrix{{1.0, 0.0}, {0.0, -1e-3}}).classification, PsdClass::Indefinite);
}

TEST(Psd, MinorsAndEigenvaluesCohere) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 1 + trial % 6;
        Matrix m = random_symmetric(rng, n);
        if (trial % 2) m = m * m;  // half the cases are PSD
        const auto v = psd_test(m);
        bool minors_positive = true;
        for (double d : v.minors) minors_positive = minors_positive && d > v.tolerance;
        if (minors_positive) {
            EXPECT_NE(v.classification, PsdClass::Indefinite);
        }
        if (v.classification == PsdClass::PositiveDefinite) {
            for (double d : v.minors) EXPECT_GT(d, 0.0);
        }
        EXPECT_NEAR(v.minors.back(), determinant(m), 1e-10 * std::max(1.0, std::fabs(determinant(m))));
    }
}

TEST(Complex, RealifiedEigenvaluesMatchHermitianOnes) {
    // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
    CMatrix h(2);
    h(0, 0) = 2.0;
    h(1, 1) = 2.0;
    h(0, 1) = Complex(0.0, 1.0);
    h(1, 0) = Complex(0.0, -1.0);
    const auto ev = hermitian_eigenvalues(h);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_NEAR(ev[0], 1.0, 1e-14);
    EXPECT_NEAR(ev[1], 3.0, 1e-14);
    EXPECT_EQ(complexify(realify(h)), h);
}

TEST(Complex, HermitianApplySquares) {
    CMatrix h(2);
    h(0, 0) = 1.0;
    h(1, 1) = -0.5;
    h(0, 1) = Complex(0.3, 0.4);
    h(1, 0) = Complex(0.3, -0.4);
    const CMatrix sq = hermitian_apply(h, [](double x) { return x * x; });
    const CMatrix direct = h * h;
    EXPECT_LT((sq - direct).max_abs(), 1e-13);
}
