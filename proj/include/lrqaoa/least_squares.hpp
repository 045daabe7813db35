// Copyright 2026 The lrqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LRQAOA_LEAST_SQUARES_HPP
#define LRQAOA_LEAST_SQUARES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lrqaoa {

struct LevenbergMarquardtOptions {
    int max_iterations = 200;
    double initial_damping = 1e-3;
    double relative_tolerance = 1e-15;  // stop when the SSE gain falls below this fraction
};

struct LevenbergMarquardtResult {
    std::vector<double> x;
    double sse = 0.0;
    int iterations = 0;
};

namespace detail {

// Solves A x = b for symmetric positive definite A (row-major, dim x dim) by
// Cholesky; returns false when A is not numerically positive definite.
inline bool cholesky_solve(std::vector<double> a, std::vector<double> &b, std::size_t dim) {
    for (std::size_t j = 0; j < dim; ++j) {
        double d = a[j * dim + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * dim + k] * a[j * dim + k];
        if (!(d > 0.0)) return false;
        a[j * dim + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < dim; ++i) {
            double s = a[i * dim + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * dim + k] * a[j * dim + k];
            a[i * dim + j] = s / a[j * dim + j];
        }
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= a[i * dim + k] * b[k];
        b[i] /= a[i * dim + i];
    }
    for (std::size_t i = dim; i-- > 0;) {
        for (std::size_t k = i + 1; k < dim; ++k) b[i] -= a[k * dim + i] * b[k];
        b[i] /= a[i * dim + i];
    }
    return true;
}

}  // namespace detail

/// Damped Gauss-Newton on sum_k r_k(x)^2 with a central-difference Jacobian.
/// `residuals(x, out)` fills out (fixed length). Only improving steps are
/// taken, so the result is never worse than x0.
template <typename Residuals>
LevenbergMarquardtResult levenberg_marquardt(Residuals &&residuals, std::vector<double> x0,
                                             const LevenbergMarquardtOptions &options = {}) {
    const std::size_t dim = x0.size();
    std::vector<double> r;
    residuals(x0, r);
    const std::size_t m = r.size();
    auto sse_of = [](const std::vector<double> &v) {
        double s = 0.0;
        for (double e : v) s += e * e;
        return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
    };
    LevenbergMarquardtResult out{x0, sse_of(r), 0};
    if (!std::isfinite(out.sse)) return out;

    std::vector<double> jac(m * dim), rp, rm, jtj(dim * dim), jtr(dim), step(dim), trial(dim), rt;
    double lambda = options.initial_damping;
    for (int it = 0; it < options.max_iterations; ++it) {
        out.iterations = it + 1;
        std::vector<double> x = out.x;
        for (std::size_t p = 0; p < dim; ++p) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[p]));
            const double keep = x[p];
            x[p] = keep + h;
            residuals(x, rp);
            x[p] = keep - h;
            residuals(x, rm);
            x[p] = keep;
            for (std::size_t k = 0; k < m; ++k) jac[k * dim + p] = (rp[k] - rm[k]) / (2.0 * h);
        }
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t a = 0; a < dim; ++a) {
                jtr[a] += jac[k * dim + a] * r[k];
                for (std::size_t b = 0; b <= a; ++b) jtj[a * dim + b] += jac[k * dim + a] * jac[k * dim + b];
            }
        }
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < a; ++b) jtj[b * dim + a] = jtj[a * dim + b];
        }
        bool improved = false;
        for (int attempt = 0; attempt < 30 && !improved; ++attempt) {
            std::vector<double> damped = jtj;
            for (std::size_t a = 0; a < dim; ++a) damped[a * dim + a] += lambda * std::max(jtj[a * dim + a], 1e-12);
            step = jtr;
            if (detail::cholesky_solve(damped, step, dim)) {
                for (std::size_t a = 0; a < dim; ++a) trial[a] = out.x[a] - step[a];
                residuals(trial, rt);
                const double sse = sse_of(rt);
                if (sse < out.sse) {
                    const double gain = out.sse - sse;
                    out.x = trial;
                    r = rt;
                    const bool small_gain = gain <= options.relative_tolerance * out.sse;
                    out.sse = sse;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    improved = true;
                    if (small_gain) return out;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if (!improved) break;
    }
    return out;
}

}  // namespace lrqaoa

#endif  // LRQAOA_LEAST_SQUARES_HPP
