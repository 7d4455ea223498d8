// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "glosskit/adamw.hpp"
#include "glosskit/gradcheck.hpp"
#include "glosskit/matrix.hpp"
#include "glosskit/nn.hpp"
#include "nn_test_util.hpp"

using glosskit::Matrix;
using glosskit::SplitMix64;
namespace nn = glosskit::nn;

TEST_CASE("linear maps the identity input to the weight matrix") {
    Matrix<double> x(2, 2);
    x.at(0, 0) = 1.0;
    x.at(1, 1) = 1.0;
    Matrix<double> w(2, 2);
    w.at(0, 0) = 1.0; w.at(0, 1) = 2.0;
    w.at(1, 0) = 3.0; w.at(1, 1) = 4.0;
    const Matrix<double> out = nn::linear(x, w, std::vector<double>{0.0, 0.0});
    CHECK(out.data == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("linear broadcasts the bias over zero input") {
    const Matrix<double> x(3, 2, 0.0);
    const Matrix<double> w(2, 2, 0.0);
    const Matrix<double> out = nn::linear(x, w, std::vector<double>{1.0, 1.0});
    for (std::size_t i = 0; i < out.rows; ++i) {
        CHECK(out.at(i, 0) == 1.0);
        CHECK(out.at(i, 1) == 1.0);
    }
}

TEST_CASE("linear rejects nonconforming shapes") {
    const Matrix<double> x(2, 3);
    const Matrix<double> w(2, 2);
    CHECK_THROWS_AS(nn::linear(x, w, std::vector<double>{}), glosskit::ShapeError);
}

TEST_CASE("linear gradient check") {
    SplitMix64 rng(11);
    CHECK(gktest::check_linear(rng, 3, 4, 2) < 1e-6);
}

TEST_CASE("layer_norm maps constant rows to the beta row") {
    Matrix<double> x(2, 4, 3.5);
    const std::vector<double> gamma(4, 1.0);
    const std::vector<double> beta(4, 0.0);
    const Matrix<double> out = nn::layer_norm(x, gamma, beta);
    for (double v : out.data) CHECK(std::abs(v) < 1e-6);
}

TEST_CASE("layer_norm with unit gamma has row mean equal to the beta mean") {
    SplitMix64 rng(12);
    const Matrix<double> x = gktest::random_matrix(rng, 5, 8, 2.0);
    const std::vector<double> ones(8, 1.0);
    const std::vector<double> beta(8, 0.25);
    const Matrix<double> out = nn::layer_norm(x, ones, beta);
    for (std::size_t i = 0; i < out.rows; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < out.cols; ++j) mean += out.at(i, j);
        mean /= static_cast<double>(out.cols);
        CHECK(std::abs(mean - 0.25) < 1e-6);
    }
}

TEST_CASE("layer_norm gradient check") {
    SplitMix64 rng(13);
    CHECK(gktest::check_layer_norm(rng, 4, 6) < 1e-6);
}

TEST_CASE("gelu fixes zero and approaches identity") {
    Matrix<double> x(1, 3);
    x.data = {0.0, 10.0, -10.0};
    const Matrix<double> out = nn::gelu(x);
    CHECK(out.data[0] == 0.0);
    CHECK(std::abs(out.data[1] - 10.0) < 1e-4);
    CHECK(std::abs(out.data[2]) < 1e-4);
}

TEST_CASE("gelu gradient check") {
    SplitMix64 rng(14);
    CHECK(gktest::check_gelu(rng, 3, 5) < 1e-6);
}

TEST_CASE("softmax rows sum to one") {
    SplitMix64 rng(15);
    Matrix<double> x = gktest::random_matrix(rng, 6, 9, 3.0);
    nn::softmax_rows_inplace(x);
    for (std::size_t i = 0; i < x.rows; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < x.cols; ++j) sum += x.at(i, j);
        CHECK(std::abs(sum - 1.0) < 1e-6);
    }
}

TEST_CASE("single-position attention reduces to Wo(Wv x)") {
    SplitMix64 rng(16);
    const Matrix<double> x = gktest::random_matrix(rng, 1, 8, 1.0);
    const Matrix<double> wq = gktest::random_matrix(rng, 8, 8);
    const Matrix<double> wk = gktest::random_matrix(rng, 8, 8);
    const Matrix<double> wv = gktest::random_matrix(rng, 8, 8);
    const Matrix<double> wo = gktest::random_matrix(rng, 8, 8);
    const Matrix<double> out =
        nn::multi_head_attention(x, wq, wk, wv, wo, 2, std::vector<std::uint8_t>{1});
    const Matrix<double> expected = glosskit::matmul(glosskit::matmul(x, wv), wo);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        CHECK(std::abs(out.data[i] - expected.data[i]) < 1e-9);
    }
}

TEST_CASE("attention with no positional signal is permutation-equivariant") {
    SplitMix64 rng(17);
    const std::size_t n = 5, d = 8;
    const Matrix<double> x = gktest::random_matrix(rng, n, d, 1.0);
    const Matrix<double> wq = gktest::random_matrix(rng, d, d);
    const Matrix<double> wk = gktest::random_matrix(rng, d, d);
    const Matrix<double> wv = gktest::random_matrix(rng, d, d);
    const Matrix<double> wo = gktest::random_matrix(rng, d, d);
    const Matrix<double> out = nn::multi_head_attention(x, wq, wk, wv, wo, 2, {});

    std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    Matrix<double> xp(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) xp.at(i, j) = x.at(perm[i], j);
    }
    const Matrix<double> outp = nn::multi_head_attention(xp, wq, wk, wv, wo, 2, {});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            CHECK(std::abs(outp.at(i, j) - out.at(perm[i], j)) < 1e-9);
        }
    }
}

TEST_CASE("masked keys receive vanishing attention weight") {
    SplitMix64 rng(18);
    const std::size_t n = 4, d = 8;
    const Matrix<double> x = gktest::random_matrix(rng, n, d, 1.0);
    const Matrix<double> wq = gktest::random_matrix(rng, d, d);
    const Matrix<double> wk = gktest::random_matrix(rng, d, d);
    const Matrix<double> wv = gktest::random_matrix(rng, d, d);
    const Matrix<double> wo = gktest::random_matrix(rng, d, d);
    std::vector<std::uint8_t> mask{1, 1, 0, 1};
    nn::AttentionCache<double> cache;
    nn::multi_head_attention(x, wq, wk, wv, wo, 2, mask, &cache);
    for (const auto& head : cache.weights) {
        for (std::size_t i = 0; i < n; ++i) CHECK(head.at(i, 2) < 1e-12);
    }
}

TEST_CASE("attention gradient check") {
    SplitMix64 rng(19);
    CHECK(gktest::check_attention(rng, 4, 8, 2, false) < 1e-5);
    CHECK(gktest::check_attention(rng, 4, 8, 2, true) < 1e-5);
}

TEST_CASE("cross entropy of uniform logits is ln(classes)") {
    const Matrix<double> logits(1, 4, 0.7);
    const auto result = nn::cross_entropy(logits, {2}, {});
    CHECK(std::abs(result.loss - std::log(4.0)) < 1e-12);
}

TEST_CASE("cross entropy of a confident correct prediction vanishes") {
    Matrix<double> logits(1, 4, 0.0);
    logits.at(0, 1) = 50.0;
    const auto result = nn::cross_entropy(logits, {1}, {});
    CHECK(result.loss < 1e-12);
}

TEST_CASE("cross entropy ignores masked rows exactly") {
    SplitMix64 rng(20);
    const Matrix<double> logits = gktest::random_matrix(rng, 3, 5, 2.0);
    const auto result = nn::cross_entropy(logits, {0, 1, 2}, {0, 1, 0});
    for (std::size_t j = 0; j < 5; ++j) CHECK(result.grad_logits.at(1, j) == 0.0);
    CHECK(result.counted == 2);
}

TEST_CASE("cross entropy with everything ignored is an EmptyBatchError") {
    const Matrix<double> logits(2, 3, 0.0);
    CHECK_THROWS_AS(nn::cross_entropy(logits, {0, 0}, {1, 1}), glosskit::EmptyBatchError);
}

TEST_CASE("cross entropy gradient check") {
    SplitMix64 rng(21);
    CHECK(gktest::check_cross_entropy(rng, 6, 5, true) < 1e-6);
}

TEST_CASE("adamw first step matches the hand-derived value") {
    std::vector<double> p{1.0};
    nn::AdamWState<double> state(1, {0.1, 0.9, 0.999, 1e-8, 0.01});
    const std::vector<double> g{1.0};
    nn::adamw_step<double>(p, g, state);
    CHECK(std::abs(p[0] - 0.899) <= 1e-9);
    CHECK(std::abs(p[0] - (1.0 - 0.1 / (1.0 + 1e-8) - 0.001)) < 1e-15);
    CHECK(state.step == 1);
    CHECK(std::abs(state.m[0] - 0.1) < 1e-15);
    CHECK(std::abs(state.v[0] - 0.001) < 1e-15);
}

TEST_CASE("adamw with zero gradient and zero decay leaves parameters alone") {
    std::vector<double> p{0.5, -2.0};
    nn::AdamWState<double> state(2, {0.1, 0.9, 0.999, 1e-8, 0.0});
    const std::vector<double> g{0.0, 0.0};
    nn::adamw_step<double>(p, g, state);
    CHECK(p == std::vector<double>{0.5, -2.0});
}

TEST_CASE("adamw decay is decoupled: zero gradient shrinks by lr*wd exactly") {
    std::vector<double> p{2.0};
    nn::AdamWState<double> state(1, {0.1, 0.9, 0.999, 1e-8, 0.01});
    const std::vector<double> g{0.0};
    nn::adamw_step<double>(p, g, state);
    CHECK(std::abs(p[0] - (2.0 - 0.1 * 0.01 * 2.0)) < 1e-15);
}

TEST_CASE("adamw is bitwise deterministic") {
    const auto run = [] {
        std::vector<float> p{1.0f, -0.5f, 0.25f};
        nn::AdamWState<float> state(3, {3e-4, 0.9, 0.999, 1e-8, 0.01});
        const std::vector<float> g{0.3f, -0.1f, 0.9f};
        for (int i = 0; i < 10; ++i) nn::adamw_step<float>(p, g, state);
        return p;
    };
    CHECK(run() == run());
}

TEST_CASE("adamw rejects mismatched sizes") {
    std::vector<double> p{1.0};
    nn::AdamWState<double> state(2, {});
    const std::vector<double> g{1.0};
    CHECK_THROWS_AS(nn::adamw_step<double>(p, g, state), glosskit::ShapeError);
}

TEST_CASE("grad_check is exact on a quadratic and catches a wrong gradient") {
    std::vector<double> p{3.0};
    const auto f = [](std::span<const double> v) { return v[0] * v[0]; };
    CHECK(nn::grad_check(f, p, std::vector<double>{6.0}) < 1e-8);
    // Deliberately doubled gradient: relative error must be ~0.5.
    const double err = nn::grad_check(f, p, std::vector<double>{12.0});
    CHECK(err > 0.45);
    CHECK(err < 0.55);
}
