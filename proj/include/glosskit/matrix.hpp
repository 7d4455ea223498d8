// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major matrices over float (training) or double (gradient
// checking). Single-threaded on purpose: results must be bitwise
// reproducible, and the saxpy-ordered loops below auto-vectorize without
// any FP reassociation.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "glosskit/errors.hpp"

namespace glosskit {

template <class Real>
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Real> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, Real fill = Real(0)) : rows(r), cols(c), data(r * c, fill) {
        if (r == 0 || c == 0) throw ShapeError("matrix dimensions must be >= 1");
    }

    Real& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const Real& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    Real* row(std::size_t r) { return data.data() + r * cols; }
    const Real* row(std::size_t r) const { return data.data() + r * cols; }

    bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }

    bool operator==(const Matrix&) const = default;
};

namespace detail {

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ShapeError(what);
}

}  // namespace detail

// C = A * B
template <class Real>
Matrix<Real> matmul(const Matrix<Real>& a, const Matrix<Real>& b) {
    detail::require(a.cols == b.rows, "matmul: inner dimensions differ");
    Matrix<Real> c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        Real* ci = c.row(i);
        const Real* ai = a.row(i);
        for (std::size_t p = 0; p < a.cols; ++p) {
            const Real s = ai[p];
            const Real* bp = b.row(p);
            for (std::size_t j = 0; j < b.cols; ++j) ci[j] += s * bp[j];
        }
    }
    return c;
}

// C = A^T * B  (A is m x k, B is m x n, C is k x n)
template <class Real>
Matrix<Real> matmul_at_b(const Matrix<Real>& a, const Matrix<Real>& b) {
    detail::require(a.rows == b.rows, "matmul_at_b: row counts differ");
    Matrix<Real> c(a.cols, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const Real* ai = a.row(i);
        const Real* bi = b.row(i);
        for (std::size_t p = 0; p < a.cols; ++p) {
            const Real s = ai[p];
            Real* cp = c.row(p);
            for (std::size_t j = 0; j < b.cols; ++j) cp[j] += s * bi[j];
        }
    }
    return c;
}

// C = A * B^T  (A is m x k, B is n x k, C is m x n)
template <class Real>
Matrix<Real> matmul_a_bt(const Matrix<Real>& a, const Matrix<Real>& b) {
    detail::require(a.cols == b.cols, "matmul_a_bt: inner dimensions differ");
    Matrix<Real> c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const Real* ai = a.row(i);
        for (std::size_t j = 0; j < b.rows; ++j) {
            const Real* bj = b.row(j);
            Real acc = Real(0);
            for (std::size_t p = 0; p < a.cols; ++p) acc += ai[p] * bj[p];
            c.at(i, j) = acc;
        }
    }
    return c;
}

template <class Real>
void add_inplace(Matrix<Real>& a, const Matrix<Real>& b) {
    detail::require(a.same_shape(b), "add_inplace: shapes differ");
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

template <class Real>
void add_row_broadcast(Matrix<Real>& a, const std::vector<Real>& bias) {
    detail::require(bias.size() == a.cols, "add_row_broadcast: bias length != cols");
    for (std::size_t i = 0; i < a.rows; ++i) {
        Real* ai = a.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) ai[j] += bias[j];
    }
}

template <class Real>
std::vector<Real> column_sums(const Matrix<Real>& a) {
    std::vector<Real> sums(a.cols, Real(0));
    for (std::size_t i = 0; i < a.rows; ++i) {
        const Real* ai = a.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) sums[j] += ai[j];
    }
    return sums;
}

template <class From, class To>
Matrix<To> matrix_cast(const Matrix<From>& a) {
    Matrix<To> out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = static_cast<To>(a.data[i]);
    return out;
}

}  // namespace glosskit
