#pragma once

#include "toroidal/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace toroidal {

// Dense matrix over an exact scalar type (Int or Rat).
template <typename T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t r, size_t c, T fill = T(0)) : rows_(r), cols_(c), data_(r * c, fill) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    T& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    std::vector<T> row(size_t i) const {
        return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
    }

    void swap_rows(size_t i, size_t j) {
        for (size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }

    // row_i += f * row_j
    void add_row(size_t i, size_t j, const T& f) {
        for (size_t c = 0; c < cols_; ++c) (*this)(i, c) += f * (*this)(j, c);
    }

    void scale_row(size_t i, const T& f) {
        for (size_t c = 0; c < cols_; ++c) (*this)(i, c) *= f;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("matrix/vector size mismatch");
        std::vector<T> y(rows_, T(0));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product size mismatch");
        Matrix p(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const T& a = (*this)(i, k);
                if (a == T(0)) continue;
                for (size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

  private:
    size_t rows_, cols_;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;

// Bareiss fraction-free determinant; exact for Int, also works for Rat.
template <typename T>
T det(Matrix<T> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det of non-square matrix");
    size_t n = m.rows();
    if (n == 0) return T(1);
    T prev(1);
    T sign(1);
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == T(0)) {
            size_t p = k + 1;
            while (p < n && m(p, k) == T(0)) ++p;
            if (p == n) return T(0);
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                T num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = num / prev;  // divides exactly (Bareiss)
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// Reduced row echelon form over Rat; returns pivot columns.
inline std::vector<size_t> rref(RatMatrix& m) {
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(r, p);
        Rat inv = Rat(1) / m(r, c);
        m.scale_row(r, inv);
        for (size_t i = 0; i < m.rows(); ++i)
            if (i != r && m(i, c) != 0) m.add_row(i, r, -m(i, c));
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline size_t rank(RatMatrix m) { return rref(m).size(); }

// Basis of the right kernel {x : m x = 0}, one vector per row of the result.
inline RatMatrix kernel_basis(RatMatrix m) {
    size_t nc = m.cols();
    std::vector<size_t> pivots = rref(m);
    std::vector<bool> is_pivot(nc, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<size_t> free_cols;
    for (size_t c = 0; c < nc; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    RatMatrix k(free_cols.size(), nc);
    for (size_t fi = 0; fi < free_cols.size(); ++fi) {
        size_t f = free_cols[fi];
        k(fi, f) = 1;
        for (size_t pi = 0; pi < pivots.size(); ++pi) k(fi, pivots[pi]) = -m(pi, f);
    }
    return k;
}

// Solve m x = b; throws if inconsistent, picks the solution with free vars = 0.
inline std::vector<Rat> solve(RatMatrix m, std::vector<Rat> b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: size mismatch");
    size_t nc = m.cols();
    RatMatrix aug(m.rows(), nc + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < nc; ++j) aug(i, j) = m(i, j);
        aug(i, nc) = b[i];
    }
    std::vector<size_t> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == nc) throw std::domain_error("solve: inconsistent system");
    std::vector<Rat> x(nc, Rat(0));
    for (size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = aug(pi, nc);
    return x;
}

// Row space membership: does v lie in the span of the rows of m?
inline bool in_row_space(const RatMatrix& m, const std::vector<Rat>& v) {
    RatMatrix a(m.rows() + 1, m.cols());
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
    for (size_t j = 0; j < m.cols(); ++j) a(m.rows(), j) = v[j];
    return rank(a) == rank(m);
}

}  // namespace toroidal
