// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Differentiable layers with hand-written backward passes. There is no
// autodiff graph: the encoder architecture is fixed, and every backward here
// is covered by the finite-difference suite in the tests.
//
// Convention: forward functions optionally fill a *Cache that the matching
// backward consumes. Gradients are returned, never accumulated in place.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "glosskit/matrix.hpp"

namespace glosskit::nn {

// ---------------------------------------------------------------- linear

template <class Real>
Matrix<Real> linear(const Matrix<Real>& x, const Matrix<Real>& w, const std::vector<Real>& b) {
    detail::require(x.cols == w.rows, "linear: x.cols != w.rows");
    Matrix<Real> out = matmul(x, w);
    if (!b.empty()) add_row_broadcast(out, b);
    return out;
}

template <class Real>
struct LinearGrads {
    Matrix<Real> x;
    Matrix<Real> w;
    std::vector<Real> b;
};

template <class Real>
LinearGrads<Real> linear_backward(const Matrix<Real>& grad_out, const Matrix<Real>& x,
                                  const Matrix<Real>& w) {
    detail::require(grad_out.rows == x.rows && grad_out.cols == w.cols, "linear_backward: shape mismatch");
    return {matmul_a_bt(grad_out, w), matmul_at_b(x, grad_out), column_sums(grad_out)};
}

// ------------------------------------------------------------ layer norm

template <class Real>
struct LayerNormCache {
    Matrix<Real> xhat;
    std::vector<Real> inv_std;
};

// Per-row normalization to zero mean / unit variance (biased variance),
// then the affine scale-shift.
template <class Real>
Matrix<Real> layer_norm(const Matrix<Real>& x, const std::vector<Real>& gamma,
                        const std::vector<Real>& beta, Real eps = Real(1e-5),
                        LayerNormCache<Real>* cache = nullptr) {
    detail::require(gamma.size() == x.cols && beta.size() == x.cols, "layer_norm: affine length != cols");
    Matrix<Real> out(x.rows, x.cols);
    if (cache) {
        cache->xhat = Matrix<Real>(x.rows, x.cols);
        cache->inv_std.assign(x.rows, Real(0));
    }
    const Real d = static_cast<Real>(x.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const Real* xi = x.row(i);
        Real mean = Real(0);
        for (std::size_t j = 0; j < x.cols; ++j) mean += xi[j];
        mean /= d;
        Real var = Real(0);
        for (std::size_t j = 0; j < x.cols; ++j) {
            const Real dx = xi[j] - mean;
            var += dx * dx;
        }
        var /= d;
        const Real inv_std = Real(1) / std::sqrt(var + eps);
        Real* oi = out.row(i);
        for (std::size_t j = 0; j < x.cols; ++j) {
            const Real xhat = (xi[j] - mean) * inv_std;
            oi[j] = gamma[j] * xhat + beta[j];
            if (cache) cache->xhat.at(i, j) = xhat;
        }
        if (cache) cache->inv_std[i] = inv_std;
    }
    return out;
}

template <class Real>
struct LayerNormGrads {
    Matrix<Real> x;
    std::vector<Real> gamma;
    std::vector<Real> beta;
};

template <class Real>
LayerNormGrads<Real> layer_norm_backward(const Matrix<Real>& grad_out,
                                         const LayerNormCache<Real>& cache,
                                         const std::vector<Real>& gamma) {
    const std::size_t rows = grad_out.rows;
    const std::size_t cols = grad_out.cols;
    LayerNormGrads<Real> grads;
    grads.x = Matrix<Real>(rows, cols);
    grads.gamma.assign(cols, Real(0));
    grads.beta.assign(cols, Real(0));
    const Real d = static_cast<Real>(cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Real* gi = grad_out.row(i);
        const Real* xh = cache.xhat.row(i);
        Real sum_dxhat = Real(0);
        Real sum_dxhat_xhat = Real(0);
        for (std::size_t j = 0; j < cols; ++j) {
            const Real dxhat = gi[j] * gamma[j];
            sum_dxhat += dxhat;
            sum_dxhat_xhat += dxhat * xh[j];
            grads.gamma[j] += gi[j] * xh[j];
            grads.beta[j] += gi[j];
        }
        Real* gx = grads.x.row(i);
        for (std::size_t j = 0; j < cols; ++j) {
            const Real dxhat = gi[j] * gamma[j];
            gx[j] = cache.inv_std[i] * (dxhat - sum_dxhat / d - xh[j] * sum_dxhat_xhat / d);
        }
    }
    return grads;
}

// ------------------------------------------------------------------ gelu

// Tanh approximation; exact erf would change nothing at this scale.
template <class Real>
Real gelu_scalar(Real x) {
    const Real c = static_cast<Real>(std::sqrt(2.0 / std::numbers::pi));
    const Real u = c * (x + Real(0.044715) * x * x * x);
    return Real(0.5) * x * (Real(1) + std::tanh(u));
}

template <class Real>
Matrix<Real> gelu(const Matrix<Real>& x) {
    Matrix<Real> out(x.rows, x.cols);
    for (std::size_t i = 0; i < x.data.size(); ++i) out.data[i] = gelu_scalar(x.data[i]);
    return out;
}

template <class Real>
Matrix<Real> gelu_backward(const Matrix<Real>& grad_out, const Matrix<Real>& x) {
    detail::require(grad_out.same_shape(x), "gelu_backward: shape mismatch");
    Matrix<Real> grad(x.rows, x.cols);
    const Real c = static_cast<Real>(std::sqrt(2.0 / std::numbers::pi));
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        const Real xi = x.data[i];
        const Real u = c * (xi + Real(0.044715) * xi * xi * xi);
        const Real t = std::tanh(u);
        const Real du = c * (Real(1) + Real(3) * Real(0.044715) * xi * xi);
        const Real dgelu = Real(0.5) * (Real(1) + t) + Real(0.5) * xi * (Real(1) - t * t) * du;
        grad.data[i] = grad_out.data[i] * dgelu;
    }
    return grad;
}

// --------------------------------------------------------------- softmax

// Stable row-wise softmax, in place.
template <class Real>
void softmax_rows_inplace(Matrix<Real>& x) {
    for (std::size_t i = 0; i < x.rows; ++i) {
        Real* xi = x.row(i);
        Real maxv = xi[0];
        for (std::size_t j = 1; j < x.cols; ++j) maxv = std::max(maxv, xi[j]);
        Real sum = Real(0);
        for (std::size_t j = 0; j < x.cols; ++j) {
            xi[j] = std::exp(xi[j] - maxv);
            sum += xi[j];
        }
        const Real inv = Real(1) / sum;
        for (std::size_t j = 0; j < x.cols; ++j) xi[j] *= inv;
    }
}

// dL/ds for y = softmax(s) given dL/dy, per row: dS = y * (dY - sum(dY * y)).
template <class Real>
Matrix<Real> softmax_backward(const Matrix<Real>& softmax_out, const Matrix<Real>& grad_out) {
    detail::require(softmax_out.same_shape(grad_out), "softmax_backward: shape mismatch");
    Matrix<Real> grad(softmax_out.rows, softmax_out.cols);
    for (std::size_t i = 0; i < softmax_out.rows; ++i) {
        const Real* yi = softmax_out.row(i);
        const Real* gi = grad_out.row(i);
        Real dot = Real(0);
        for (std::size_t j = 0; j < softmax_out.cols; ++j) dot += yi[j] * gi[j];
        Real* oi = grad.row(i);
        for (std::size_t j = 0; j < softmax_out.cols; ++j) oi[j] = yi[j] * (gi[j] - dot);
    }
    return grad;
}

// ------------------------------------------------- multi-head attention

inline constexpr double kMaskBias = -1e9;  // large finite bias, not -inf, to keep softmax NaN-free

template <class Real>
struct AttentionCache {
    Matrix<Real> q, k, v;               // n x d
    std::vector<Matrix<Real>> weights;  // per head, n x n softmax rows
    Matrix<Real> concat;                // n x d, heads concatenated before the output projection
};

// Scaled dot-product self-attention over one sequence. `key_valid[j]` false
// marks position j unattendable (padding); such keys get the -1e9 bias for
// every query.
template <class Real>
Matrix<Real> multi_head_attention(const Matrix<Real>& x, const Matrix<Real>& wq,
                                  const Matrix<Real>& wk, const Matrix<Real>& wv,
                                  const Matrix<Real>& wo, std::size_t heads,
                                  const std::vector<std::uint8_t>& key_valid,
                                  AttentionCache<Real>* cache = nullptr) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    detail::require(wq.rows == d && wq.cols == d && wk.rows == d && wk.cols == d &&
                        wv.rows == d && wv.cols == d && wo.rows == d && wo.cols == d,
                    "attention: projection shapes must be d x d");
    detail::require(heads >= 1 && d % heads == 0, "attention: d must be divisible by heads");
    detail::require(key_valid.empty() || key_valid.size() == n, "attention: mask length != rows");

    const std::size_t dh = d / heads;
    const Real scale = Real(1) / static_cast<Real>(std::sqrt(static_cast<double>(dh)));

    Matrix<Real> q = matmul(x, wq);
    Matrix<Real> k = matmul(x, wk);
    Matrix<Real> v = matmul(x, wv);

    Matrix<Real> concat(n, d);
    std::vector<Matrix<Real>> weights;
    weights.reserve(heads);

    for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t off = h * dh;
        Matrix<Real> scores(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const Real* qi = q.row(i) + off;
            Real* si = scores.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                const Real* kj = k.row(j) + off;
                Real acc = Real(0);
                for (std::size_t p = 0; p < dh; ++p) acc += qi[p] * kj[p];
                si[j] = acc * scale;
                if (!key_valid.empty() && !key_valid[j]) si[j] += static_cast<Real>(kMaskBias);
            }
        }
        softmax_rows_inplace(scores);
        for (std::size_t i = 0; i < n; ++i) {
            const Real* ai = scores.row(i);
            Real* oi = concat.row(i) + off;
            for (std::size_t j = 0; j < n; ++j) {
                const Real a = ai[j];
                const Real* vj = v.row(j) + off;
                for (std::size_t p = 0; p < dh; ++p) oi[p] += a * vj[p];
            }
        }
        weights.push_back(std::move(scores));
    }

    Matrix<Real> out = matmul(concat, wo);
    if (cache) {
        cache->q = std::move(q);
        cache->k = std::move(k);
        cache->v = std::move(v);
        cache->weights = std::move(weights);
        cache->concat = std::move(concat);
    }
    return out;
}

template <class Real>
struct AttentionGrads {
    Matrix<Real> x;
    Matrix<Real> wq, wk, wv, wo;
};

template <class Real>
AttentionGrads<Real> multi_head_attention_backward(const Matrix<Real>& grad_out, const Matrix<Real>& x,
                                                   const Matrix<Real>& wq, const Matrix<Real>& wk,
                                                   const Matrix<Real>& wv, const Matrix<Real>& wo,
                                                   std::size_t heads, const AttentionCache<Real>& cache) {
    const std::size_t n = x.rows;
    const std::size_t d = x.cols;
    const std::size_t dh = d / heads;
    const Real scale = Real(1) / static_cast<Real>(std::sqrt(static_cast<double>(dh)));

    AttentionGrads<Real> grads;
    grads.wo = matmul_at_b(cache.concat, grad_out);
    Matrix<Real> d_concat = matmul_a_bt(grad_out, wo);

    Matrix<Real> dq(n, d);
    Matrix<Real> dk(n, d);
    Matrix<Real> dv(n, d);

    for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t off = h * dh;
        const Matrix<Real>& a = cache.weights[h];

        // dA[i][j] = sum_p d_concat[i][off+p] * v[j][off+p]
        Matrix<Real> da(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const Real* dci = d_concat.row(i) + off;
            Real* dai = da.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                const Real* vj = cache.v.row(j) + off;
                Real acc = Real(0);
                for (std::size_t p = 0; p < dh; ++p) acc += dci[p] * vj[p];
                dai[j] = acc;
            }
        }
        // dV[j] += sum_i A[i][j] * d_concat[i]
        for (std::size_t i = 0; i < n; ++i) {
            const Real* ai = a.row(i);
            const Real* dci = d_concat.row(i) + off;
            for (std::size_t j = 0; j < n; ++j) {
                Real* dvj = dv.row(j) + off;
                const Real w = ai[j];
                for (std::size_t p = 0; p < dh; ++p) dvj[p] += w * dci[p];
            }
        }
        Matrix<Real> ds = softmax_backward(a, da);  // mask bias is constant, so it drops out
        // dQ[i] += scale * sum_j dS[i][j] * K[j];  dK[j] += scale * sum_i dS[i][j] * Q[i]
        for (std::size_t i = 0; i < n; ++i) {
            const Real* dsi = ds.row(i);
            Real* dqi = dq.row(i) + off;
            const Real* qi = cache.q.row(i) + off;
            for (std::size_t j = 0; j < n; ++j) {
                const Real g = dsi[j] * scale;
                const Real* kj = cache.k.row(j) + off;
                Real* dkj = dk.row(j) + off;
                for (std::size_t p = 0; p < dh; ++p) {
                    dqi[p] += g * kj[p];
                    dkj[p] += g * qi[p];
                }
            }
        }
    }

    grads.wq = matmul_at_b(x, dq);
    grads.wk = matmul_at_b(x, dk);
    grads.wv = matmul_at_b(x, dv);
    grads.x = matmul_a_bt(dq, wq);
    add_inplace(grads.x, matmul_a_bt(dk, wk));
    add_inplace(grads.x, matmul_a_bt(dv, wv));
    return grads;
}

// --------------------------------------------------------- cross entropy

template <class Real>
struct CrossEntropyResult {
    Real loss;
    Matrix<Real> grad_logits;  // exactly zero rows at ignored positions
    std::size_t counted;
};

// Mean negative log-softmax over the non-ignored rows. `ignore[i]` != 0
// excludes row i from both the loss and the gradient.
template <class Real>
CrossEntropyResult<Real> cross_entropy(const Matrix<Real>& logits,
                                       const std::vector<std::int32_t>& targets,
                                       const std::vector<std::uint8_t>& ignore) {
    detail::require(targets.size() == logits.rows, "cross_entropy: targets length != rows");
    detail::require(ignore.empty() || ignore.size() == logits.rows,
                    "cross_entropy: ignore length != rows");
    std::size_t counted = 0;
    for (std::size_t i = 0; i < logits.rows; ++i) {
        if (ignore.empty() || !ignore[i]) ++counted;
    }
    if (counted == 0) throw EmptyBatchError("cross_entropy: every position is ignored");

    CrossEntropyResult<Real> result;
    result.counted = counted;
    result.grad_logits = Matrix<Real>(logits.rows, logits.cols);
    const Real inv_count = Real(1) / static_cast<Real>(counted);
    Real loss = Real(0);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        if (!ignore.empty() && ignore[i]) continue;
        const std::int32_t t = targets[i];
        detail::require(t >= 0 && static_cast<std::size_t>(t) < logits.cols,
                        "cross_entropy: target out of range");
        const Real* li = logits.row(i);
        Real maxv = li[0];
        for (std::size_t j = 1; j < logits.cols; ++j) maxv = std::max(maxv, li[j]);
        Real sum = Real(0);
        for (std::size_t j = 0; j < logits.cols; ++j) sum += std::exp(li[j] - maxv);
        const Real log_z = std::log(sum) + maxv;
        loss += (log_z - li[static_cast<std::size_t>(t)]) * inv_count;
        Real* gi = result.grad_logits.row(i);
        const Real inv_sum = Real(1) / sum;
        for (std::size_t j = 0; j < logits.cols; ++j) {
            gi[j] = std::exp(li[j] - maxv) * inv_sum * inv_count;
        }
        gi[static_cast<std::size_t>(t)] -= inv_count;
    }
    result.loss = loss;
    return result;
}

}  // namespace glosskit::nn
