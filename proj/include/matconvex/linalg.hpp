// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "matconvex/errors.hpp"

namespace matconvex {

/// Dense square real matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int n, double fill = 0.0) : n_(n), a_(static_cast<std::size_t>(n) * n, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows) : Matrix(static_cast<int>(rows.size())) {
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != n_) throw PreconditionError("matrix rows must be square");
            int j = 0;
            for (double v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static Matrix identity(int n) {
        Matrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int size() const noexcept { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& data() const noexcept { return a_; }

    Matrix leading(int m) const {
        Matrix b(m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) b(i, j) = (*this)(i, j);
        return b;
    }

    double inf_norm() const {
        double best = 0.0;
        for (int i = 0; i < n_; ++i) {
            double row = 0.0;
            for (int j = 0; j < n_; ++j) row += std::fabs((*this)(i, j));
            best = std::max(best, row);
        }
        return best;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int n_ = 0;
    std::vector<double> a_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    const int n = a.size();
    Matrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column j belongs to values[j]
};

/// Cyclic Jacobi eigenvalue decomposition of a real symmetric matrix.
inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 100) {
    const int n = a.size();
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0, total = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                total += a(i, j) * a(i, j);
                if (i != j) off += a(i, j) * a(i, j);
            }
        if (off <= 1e-30 * total || off == 0.0) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
    SymmetricEigen out{std::vector<double>(n), Matrix(n)};
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

/// Determinant by LU with partial pivoting.
inline double determinant(Matrix a) {
    const int n = a.size();
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            det = -det;
        }
        det *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

/// Leading principal minors D_1..D_n by fraction-free (Bareiss) elimination
/// without pivoting: after step k the pivot equals D_{k+1}. A (numerically)
/// vanishing pivot breaks the recurrence; the remaining minors then come
/// from pivoted LU on each leading block.
inline std::vector<double> leading_minors(const Matrix& m) {
    const int n = m.size();
    std::vector<double> minors(n, 0.0);
    Matrix a = m;
    double scale = 0.0;
    for (double v : m.data()) scale = std::max(scale, std::fabs(v));
    double prev = 1.0;
    double scale_pow = scale;
    int k = 0;
    for (; k < n; ++k) {
        minors[k] = a(k, k);
        if (k == n - 1) break;
        if (std::fabs(a(k, k)) <= 1e-13 * scale_pow) break;
        scale_pow *= scale;
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    for (int r = k + 1; r < n; ++r) minors[r] = determinant(m.leading(r + 1));
    return minors;
}

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

    static CMatrix identity(int n) {
        CMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static CMatrix from_real(const Matrix& r) {
        CMatrix m(r.size());
        for (int i = 0; i < r.size(); ++i)
            for (int j = 0; j < r.size(); ++j) m(i, j) = r(i, j);
        return m;
    }

    int size() const noexcept { return n_; }
    Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    CMatrix adjoint() const {
        CMatrix b(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) b(i, j) = std::conj((*this)(j, i));
        return b;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) {
        for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
        return a;
    }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) {
        for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
        return a;
    }
    friend CMatrix operator*(double s, CMatrix a) {
        for (auto& z : a.a_) z *= s;
        return a;
    }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        const int n = a.n_;
        CMatrix c(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Complex aik = a(i, k);
                for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    int n_ = 0;
    std::vector<Complex> a_;
};

/// Real symmetric 2n x 2n image [[Re, -Im], [Im, Re]] of a Hermitian matrix.
/// The map is a *-homomorphism, so spectral functions commute with it and
/// every eigenvalue of the original appears twice.
inline Matrix realify(const CMatrix& h) {
    const int n = h.size();
    Matrix r(2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = 0.5 * (h(i, j).real() + h(j, i).real());
            const double im = 0.5 * (h(i, j).imag() - h(j, i).imag());
            r(i, j) = re;
            r(i + n, j + n) = re;
            r(i + n, j) = im;
            r(i, j + n) = -im;
        }
    return r;
}

inline CMatrix complexify(const Matrix& r) {
    const int n = r.size() / 2;
    CMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = Complex(r(i, j), r(i + n, j));
    return h;
}

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
    const auto eig = jacobi_eigen(realify(h));
    std::vector<double> vals;
    vals.reserve(eig.values.size() / 2);
    for (std::size_t k = 0; k < eig.values.size(); k += 2) vals.push_back(0.5 * (eig.values[k] + eig.values[k + 1]));
    return vals;
}

/// Applies a scalar function to the spectrum of a Hermitian matrix.
template <class Fn>
CMatrix hermitian_apply(const CMatrix& h, Fn&& fn) {
    const auto eig = jacobi_eigen(realify(h));
    const int m = eig.vectors.size();
    std::vector<double> fvals(m);
    for (int k = 0; k < m; ++k) fvals[k] = fn(eig.values[k]);
    Matrix r(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += eig.vectors(i, k) * fvals[k] * eig.vectors(j, k);
            r(i, j) = s;
        }
    return complexify(r);
}

}  // namespace matconvex
