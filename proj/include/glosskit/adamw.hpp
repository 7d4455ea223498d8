// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "glosskit/errors.hpp"

namespace glosskit::nn {

struct AdamWHyper {
    double lr = 2e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

// One state per parameter tensor; m and v match the parameter length.
template <class Real>
struct AdamWState {
    std::int64_t step = 0;
    std::vector<Real> m;
    std::vector<Real> v;
    AdamWHyper hyper;

    explicit AdamWState(std::size_t size, AdamWHyper h = {})
        : m(size, Real(0)), v(size, Real(0)), hyper(h) {}
};

// Decoupled weight decay: p -= lr * m_hat / (sqrt(v_hat) + eps) + lr * wd * p.
// Moment math runs in double regardless of Real so float training keeps the
// reference update rule.
template <class Real>
void adamw_step(std::span<Real> param, std::span<const Real> grad, AdamWState<Real>& state) {
    if (param.size() != grad.size() || param.size() != state.m.size()) {
        throw ShapeError("adamw_step: parameter/gradient/state sizes differ");
    }
    state.step += 1;
    const AdamWHyper& h = state.hyper;
    const double bc1 = 1.0 - std::pow(h.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(h.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double g = static_cast<double>(grad[i]);
        const double m = h.beta1 * static_cast<double>(state.m[i]) + (1.0 - h.beta1) * g;
        const double v = h.beta2 * static_cast<double>(state.v[i]) + (1.0 - h.beta2) * g * g;
        state.m[i] = static_cast<Real>(m);
        state.v[i] = static_cast<Real>(v);
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        const double p = static_cast<double>(param[i]);
        param[i] = static_cast<Real>(p - h.lr * m_hat / (std::sqrt(v_hat) + h.eps) - h.lr * h.weight_decay * p);
    }
}

}  // namespace glosskit::nn
