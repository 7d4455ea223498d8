// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

namespace glosskit::nn {

// Central-difference gradient check. `fn` must be a deterministic scalar
// function of `params`; it is re-evaluated with one coordinate nudged by
// +/- eps and compared against `analytic`. Returns the maximum relative
// error, with denominator max(|analytic|, |numeric|, 1e-8). Use double
// parameters: finite differences are unreliable in 32-bit.
inline double grad_check(const std::function<double(std::span<const double>)>& fn,
                         std::span<double> params, std::span<const double> analytic,
                         double eps = 1e-4) {
    double max_rel = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + eps;
        const double f_plus = fn(params);
        params[i] = saved - eps;
        const double f_minus = fn(params);
        params[i] = saved;
        const double numeric = (f_plus - f_minus) / (2.0 * eps);
        const double a = analytic[i];
        const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

}  // namespace glosskit::nn
