// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared finite-difference harness for the layer backward passes. Each
// check_* builds random double-precision inputs, projects the layer output
// to a scalar with a fixed random matrix, computes analytic gradients for
// every input tensor via the layer's backward, and compares them against
// central differences over the flattened inputs.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "glosskit/gradcheck.hpp"
#include "glosskit/matrix.hpp"
#include "glosskit/nn.hpp"
#include "glosskit/rng.hpp"

namespace gktest {

using glosskit::Matrix;
using glosskit::SplitMix64;

inline Matrix<double> random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols,
                                    double scale = 0.5) {
    Matrix<double> m(rows, cols);
    for (double& x : m.data) x = scale * (2.0 * rng.next_double() - 1.0);
    return m;
}

inline std::vector<double> random_vector(SplitMix64& rng, std::size_t n, double scale = 0.5) {
    std::vector<double> v(n);
    for (double& x : v) x = scale * (2.0 * rng.next_double() - 1.0);
    return v;
}

inline double project(const Matrix<double>& out, const Matrix<double>& r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i) sum += out.data[i] * r.data[i];
    return sum;
}

// Packs tensors into one flat parameter vector for grad_check.
struct FlatPack {
    std::vector<double> values;
    std::vector<double> analytic;

    void add(const Matrix<double>& value, const Matrix<double>& grad) {
        values.insert(values.end(), value.data.begin(), value.data.end());
        analytic.insert(analytic.end(), grad.data.begin(), grad.data.end());
    }
    void add(const std::vector<double>& value, const std::vector<double>& grad) {
        values.insert(values.end(), value.begin(), value.end());
        analytic.insert(analytic.end(), grad.begin(), grad.end());
    }
};

inline double check_linear(SplitMix64& rng, std::size_t n, std::size_t d_in, std::size_t d_out) {
    const Matrix<double> x = random_matrix(rng, n, d_in);
    const Matrix<double> w = random_matrix(rng, d_in, d_out);
    const std::vector<double> b = random_vector(rng, d_out);
    const Matrix<double> r = random_matrix(rng, n, d_out, 1.0);

    const auto grads = glosskit::nn::linear_backward(r, x, w);
    FlatPack pack;
    pack.add(x, grads.x);
    pack.add(w, grads.w);
    pack.add(b, grads.b);

    const auto fn = [&](std::span<const double> p) {
        Matrix<double> px(n, d_in);
        Matrix<double> pw(d_in, d_out);
        std::vector<double> pb(d_out);
        std::size_t k = 0;
        for (double& v : px.data) v = p[k++];
        for (double& v : pw.data) v = p[k++];
        for (double& v : pb) v = p[k++];
        return project(glosskit::nn::linear(px, pw, pb), r);
    };
    return glosskit::nn::grad_check(fn, pack.values, pack.analytic);
}

inline double check_layer_norm(SplitMix64& rng, std::size_t n, std::size_t d) {
    const Matrix<double> x = random_matrix(rng, n, d, 1.0);
    const std::vector<double> gamma = random_vector(rng, d, 1.0);
    const std::vector<double> beta = random_vector(rng, d, 1.0);
    const Matrix<double> r = random_matrix(rng, n, d, 1.0);

    glosskit::nn::LayerNormCache<double> cache;
    glosskit::nn::layer_norm(x, gamma, beta, 1e-5, &cache);
    const auto grads = glosskit::nn::layer_norm_backward(r, cache, gamma);

    FlatPack pack;
    pack.add(x, grads.x);
    pack.add(gamma, grads.gamma);
    pack.add(beta, grads.beta);

    const auto fn = [&](std::span<const double> p) {
        Matrix<double> px(n, d);
        std::vector<double> pg(d), pb(d);
        std::size_t k = 0;
        for (double& v : px.data) v = p[k++];
        for (double& v : pg) v = p[k++];
        for (double& v : pb) v = p[k++];
        return project(glosskit::nn::layer_norm(px, pg, pb, 1e-5), r);
    };
    return glosskit::nn::grad_check(fn, pack.values, pack.analytic);
}

inline double check_gelu(SplitMix64& rng, std::size_t n, std::size_t d) {
    const Matrix<double> x = random_matrix(rng, n, d, 2.0);
    const Matrix<double> r = random_matrix(rng, n, d, 1.0);
    const Matrix<double> grad = glosskit::nn::gelu_backward(r, x);

    FlatPack pack;
    pack.add(x, grad);
    const auto fn = [&](std::span<const double> p) {
        Matrix<double> px(n, d);
        std::size_t k = 0;
        for (double& v : px.data) v = p[k++];
        return project(glosskit::nn::gelu(px), r);
    };
    return glosskit::nn::grad_check(fn, pack.values, pack.analytic);
}

inline double check_attention(SplitMix64& rng, std::size_t n, std::size_t d, std::size_t heads,
                              bool with_mask) {
    const Matrix<double> x = random_matrix(rng, n, d, 1.0);
    const Matrix<double> wq = random_matrix(rng, d, d);
    const Matrix<double> wk = random_matrix(rng, d, d);
    const Matrix<double> wv = random_matrix(rng, d, d);
    const Matrix<double> wo = random_matrix(rng, d, d);
    const Matrix<double> r = random_matrix(rng, n, d, 1.0);
    std::vector<std::uint8_t> mask(n, 1);
    if (with_mask && n > 1) {
        // mask out the tail, keep at least one valid key
        const std::size_t masked = 1 + rng.next_below(n - 1);
        for (std::size_t i = n - masked; i < n; ++i) mask[i] = 0;
    }

    glosskit::nn::AttentionCache<double> cache;
    glosskit::nn::multi_head_attention(x, wq, wk, wv, wo, heads, mask, &cache);
    const auto grads = glosskit::nn::multi_head_attention_backward(r, x, wq, wk, wv, wo, heads, cache);

    FlatPack pack;
    pack.add(x, grads.x);
    pack.add(wq, grads.wq);
    pack.add(wk, grads.wk);
    pack.add(wv, grads.wv);
    pack.add(wo, grads.wo);

    const auto fn = [&](std::span<const double> p) {
        Matrix<double> px(n, d), pq(d, d), pk(d, d), pv(d, d), po(d, d);
        std::size_t k = 0;
        for (double& v : px.data) v = p[k++];
        for (double& v : pq.data) v = p[k++];
        for (double& v : pk.data) v = p[k++];
        for (double& v : pv.data) v = p[k++];
        for (double& v : po.data) v = p[k++];
        return project(glosskit::nn::multi_head_attention(px, pq, pk, pv, po, heads, mask), r);
    };
    return glosskit::nn::grad_check(fn, pack.values, pack.analytic);
}

inline double check_cross_entropy(SplitMix64& rng, std::size_t n, std::size_t classes,
                                  bool with_ignore) {
    const Matrix<double> logits = random_matrix(rng, n, classes, 2.0);
    std::vector<std::int32_t> targets(n);
    std::vector<std::uint8_t> ignore(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        targets[i] = static_cast<std::int32_t>(rng.next_below(classes));
        if (with_ignore && n > 1) ignore[i] = rng.next_below(3) == 0 ? 1 : 0;
    }
    ignore[0] = 0;  // keep at least one counted position

    const auto result = glosskit::nn::cross_entropy(logits, targets, ignore);
    FlatPack pack;
    pack.add(logits, result.grad_logits);

    const auto fn = [&](std::span<const double> p) {
        Matrix<double> pl(n, classes);
        std::size_t k = 0;
        for (double& v : pl.data) v = p[k++];
        return glosskit::nn::cross_entropy(pl, targets, ignore).loss;
    };
    return glosskit::nn::grad_check(fn, pack.values, pack.analytic);
}

}  // namespace gktest
