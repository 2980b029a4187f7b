#pragma once

#include <vector>

#include "hv/scalar.hpp"

namespace hv {

// Small dense matrix; row-major. Sizes here are 2x2 and 4x4 almost always.
template <class T>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols != y.rows) throw math_error("matrix product shape mismatch");
        Matrix r(x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                if (x(i, k) == T(0)) continue;
                for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += x(i, k) * y(k, j);
            }
        return r;
    }
    friend Matrix operator+(Matrix x, const Matrix& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw math_error("matrix sum shape mismatch");
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
        return x;
    }
    friend Matrix operator-(Matrix x, const Matrix& y) {
        if (x.rows != y.rows || x.cols != y.cols) throw math_error("matrix difference shape mismatch");
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
        return x;
    }
    friend Matrix operator*(Matrix x, const T& s) {
        for (auto& v : x.a) v *= s;
        return x;
    }

    Matrix transposed() const {
        Matrix r(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    static Real magnitude(const T& v) {
        if constexpr (std::is_same_v<T, Complex>) return abs(v);
        else if constexpr (std::is_same_v<T, Rational>) return abs(make_real(v));
        else return abs(v);
    }

    Real max_abs() const {
        Real m(0);
        for (auto& v : a) m = std::max(m, magnitude(v));
        return m;
    }

    // Gaussian elimination with partial pivoting; returns (inverse, det).
    std::pair<Matrix, T> inverse_det() const {
        if (rows != cols) throw math_error("inverse of non-square matrix");
        std::size_t n = rows;
        Matrix m = *this, inv = identity(n);
        T det(1);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            Real best = magnitude(m(k, k));
            for (std::size_t i = k + 1; i < n; ++i) {
                Real v = magnitude(m(i, k));
                if (v > best) { best = v; piv = i; }
            }
            if (best == 0) throw math_error("singular matrix");
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(m(k, j), m(piv, j));
                    std::swap(inv(k, j), inv(piv, j));
                }
                det = -det;
            }
            det *= m(k, k);
            T d = m(k, k);
            for (std::size_t j = 0; j < n; ++j) { m(k, j) /= d; inv(k, j) /= d; }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == k) continue;
                T f = m(i, k);
                if (f == T(0)) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) -= f * m(k, j);
                    inv(i, j) -= f * inv(k, j);
                }
            }
        }
        return {inv, det};
    }

    Matrix inverse() const { return inverse_det().first; }
    T det() const {
        if (rows != cols) throw math_error("det of non-square matrix");
        return inverse_det().second;
    }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

template <class T>
Matrix<T> kronecker(const Matrix<T>& x, const Matrix<T>& y) {
    Matrix<T> r(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j)
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l)
                    r(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
    return r;
}

template <class T>
std::vector<T> row_times(const std::vector<T>& w, const Matrix<T>& m) {
    if (w.size() != m.rows) throw math_error("row-vector product shape mismatch");
    std::vector<T> r(m.cols, T(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        if (w[i] == T(0)) continue;
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += w[i] * m(i, j);
    }
    return r;
}

template <class T>
std::vector<T> times_col(const Matrix<T>& m, const std::vector<T>& v) {
    if (v.size() != m.cols) throw math_error("matrix-vector product shape mismatch");
    std::vector<T> r(m.rows, T(0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline Matrix<Complex> to_complex(const Matrix<Rational>& m) {
    Matrix<Complex> r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = make_complex(m.a[i]);
    return r;
}

// Sigma_n = [[0, I], [-I, 0]] (n even); the intersection pairing block matrix.
template <class T>
Matrix<T> sigma_matrix(std::size_t n) {
    if (n % 2 != 0) throw math_error("sigma matrix requires even size");
    Matrix<T> s(n, n);
    for (std::size_t i = 0; i < n / 2; ++i) {
        s(i, i + n / 2) = T(1);
        s(i + n / 2, i) = T(-1);
    }
    return s;
}

// Null space of a rectangular matrix by row reduction. For Complex entries,
// pivots below drop_tol * (largest entry) are treated as zero.
template <class T>
std::vector<std::vector<T>> null_space(Matrix<T> m, const Real& drop_tol) {
    std::size_t nr = m.rows, nc = m.cols;
    Real scale = m.max_abs();
    if (scale == 0) scale = Real(1);
    std::vector<long> pivot_of_col(nc, -1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < nc && row < nr; ++col) {
        std::size_t piv = row;
        Real best = Matrix<T>::magnitude(m(row, col));
        for (std::size_t i = row + 1; i < nr; ++i) {
            Real v = Matrix<T>::magnitude(m(i, col));
            if (v > best) { best = v; piv = i; }
        }
        bool zero;
        if constexpr (std::is_same_v<T, Rational>) zero = (best == 0);
        else zero = (best <= drop_tol * scale);
        if (zero) continue;
        if (piv != row)
            for (std::size_t j = 0; j < nc; ++j) std::swap(m(row, j), m(piv, j));
        T d = m(row, col);
        for (std::size_t j = 0; j < nc; ++j) m(row, j) /= d;
        for (std::size_t i = 0; i < nr; ++i) {
            if (i == row) continue;
            T f = m(i, col);
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < nc; ++j) m(i, j) -= f * m(row, j);
        }
        pivot_of_col[col] = static_cast<long>(row);
        ++row;
    }
    std::vector<std::vector<T>> basis;
    for (std::size_t col = 0; col < nc; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        std::vector<T> v(nc, T(0));
        v[col] = T(1);
        for (std::size_t j = 0; j < nc; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -m(static_cast<std::size_t>(pivot_of_col[j]), col);
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace hv
