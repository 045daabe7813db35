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

#ifndef LRQAOA_SKEW_GAUSSIAN_HPP
#define LRQAOA_SKEW_GAUSSIAN_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "lrqaoa/landscape.hpp"
#include "lrqaoa/least_squares.hpp"
#include "lrqaoa/nelder_mead.hpp"

namespace lrqaoa {

/// f(x) = A exp(-(x-mu)^T S (x-mu) / 2) * (1 + erf(alpha.(x-mu) / sqrt2)) / 2 + B
/// with S the inverse covariance. x = (log10 dgamma, log10 dbeta).
struct SkewGaussianParams {
    std::array<double, 2> mu{0.0, 0.0};
    std::array<double, 3> sigma_inv{1.0, 0.0, 1.0};  // S11, S12, S22
    std::array<double, 2> alpha{0.0, 0.0};
    double amp = 0.0;
    double offset = 0.0;

    double operator()(double x, double y) const {
        const double dx = x - mu[0];
        const double dy = y - mu[1];
        const double quad = sigma_inv[0] * dx * dx + 2.0 * sigma_inv[1] * dx * dy + sigma_inv[2] * dy * dy;
        const double skew = 0.5 * (1.0 + std::erf((alpha[0] * dx + alpha[1] * dy) / std::sqrt(2.0)));
        return amp * std::exp(-0.5 * quad) * skew + offset;
    }

    double sigma_inv_determinant() const { return sigma_inv[0] * sigma_inv[2] - sigma_inv[1] * sigma_inv[1]; }
};

struct SkewGaussianFit {
    SkewGaussianParams params;
    double sse = 0.0;           // sum of squared residuals of the fit
    double constant_sse = 0.0;  // same for f = mean(landscape)
};

struct LandscapeOptimum {
    double log_gamma_opt = 0.0;
    double log_beta_opt = 0.0;
    double p_opt_max = 0.0;
    double width_gamma = 0.0;
    double width_beta = 0.0;
    bool from_fit = false;
};

struct SkewFitOptions {
    int iterations_per_start = 2000;
    double parameter_tolerance = 1e-9;
};

namespace detail {

// Unconstrained vector: mu(2), L11, L21, L22, alpha(2), sqrt(A), sqrt(B),
// with S = L L^T.
inline SkewGaussianParams decode_skew(const std::vector<double> &t, double scale) {
    SkewGaussianParams p;
    p.mu = {t[0], t[1]};
    p.sigma_inv = {t[2] * t[2], t[2] * t[3], t[3] * t[3] + t[4] * t[4]};
    p.alpha = {t[5], t[6]};
    p.amp = t[7] * t[7] * scale;
    p.offset = t[8] * t[8] * scale;
    return p;
}

}  // namespace detail

/// Least-squares fit of the skew Gaussian to every node of the landscape by
/// multi-start simplex descent. Returns nullopt for flat landscapes or when
/// no start yields a finite residual.
inline std::optional<SkewGaussianFit> fit_skew_gaussian(const GridSearchLandscape &landscape,
                                                        const SkewFitOptions &options = {}) {
    const GridSpec &spec = landscape.spec;
    const int res = spec.resolution;
    const std::vector<double> &y = landscape.mean_p_opt;
    require(y.size() == spec.nodes(), ErrorCode::DimensionMismatch, "landscape does not match its grid");

    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double y_min = *min_it;
    const double y_max = *max_it;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double constant_sse = 0.0;
    for (double v : y) constant_sse += (v - mean) * (v - mean);

    if (!(y_max > 0.0) || !(y_max - y_min > 1e-12 * std::max(1.0, std::abs(y_max)))) {
        return std::nullopt;
    }

    // Fit on values scaled to max 1 for conditioning.
    const double scale = y_max;
    std::vector<double> xs(y.size()), ys(y.size()), ts(y.size());
    for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
            const auto k = static_cast<std::size_t>(i * res + j);
            xs[k] = spec.gamma_at(i);
            ys[k] = spec.beta_at(j);
            ts[k] = y[k] / scale;
        }
    }
    auto sse_scaled = [&](const std::vector<double> &t) {
        const SkewGaussianParams p = detail::decode_skew(t, 1.0);
        double total = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
            const double r = p(xs[k], ys[k]) - ts[k];
            total += r * r;
        }
        return total;
    };

    const std::size_t best_node = landscape.argmax();
    const double gx = xs[best_node];
    const double gy = ys[best_node];
    double wsum = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double w = ts[k] - y_min / scale;
        wsum += w;
        cx += w * xs[k];
        cy += w * ys[k];
    }
    if (wsum > 0.0) {
        cx /= wsum;
        cy /= wsum;
    } else {
        cx = gx;
        cy = gy;
    }
    const double lg = 4.0 / spec.gamma_span();
    const double lb = 4.0 / spec.beta_span();
    const double a0 = std::sqrt(std::max(1e-6, 1.0 - y_min / scale));
    const double b0 = std::sqrt(std::max(0.0, y_min / scale));
    const double dgx = spec.gamma_span() / 8.0;
    const double dgy = spec.beta_span() / 8.0;

    std::vector<std::vector<double>> starts = {
        {gx, gy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {cx, cy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {gx + dgx, gy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {gx - dgx, gy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {gx, gy + dgy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {gx, gy - dgy, lg, 0.0, lb, 0.0, 0.0, a0, b0},
        {gx, gy, lg, 0.0, lb, 2.0, 2.0, 1.3 * a0, b0},
        {gx, gy, lg, 0.0, lb, -2.0, -2.0, 1.3 * a0, b0},
    };
    const std::vector<double> steps = {dgx, dgy, 0.3 * lg, 0.3 * lg, 0.3 * lb, 1.0, 1.0, 0.2, 0.1};

    NelderMeadOptions nm;
    nm.max_iterations = options.iterations_per_start;
    nm.x_tolerance = options.parameter_tolerance;
    nm.f_tolerance = 1e-18;

    std::optional<NelderMeadResult> best;
    for (const auto &start : starts) {
        NelderMeadResult r = nelder_mead(sse_scaled, start, steps, nm);
        if (std::isfinite(r.value) && (!best || r.value < best->value)) best = std::move(r);
    }
    if (!best) return std::nullopt;

    // Least-squares polish of the best simplex point. Near alpha = 0 the skew
    // and shift directions are degenerate, so the nested symmetric model
    // (alpha fixed at zero) is polished as well and the lower residual wins.
    auto residuals = [&](const std::vector<double> &t, std::vector<double> &out) {
        const SkewGaussianParams p = detail::decode_skew(t, 1.0);
        out.resize(ts.size());
        for (std::size_t k = 0; k < ts.size(); ++k) out[k] = p(xs[k], ys[k]) - ts[k];
    };
    auto consider = [&](const LevenbergMarquardtResult &r) {
        if (r.sse < best->value) {
            best->x = r.x;
            best->value = r.sse;
        }
    };
    consider(levenberg_marquardt(residuals, best->x));
    auto with_zero_skew = [](const std::vector<double> &u) {
        return std::vector<double>{u[0], u[1], u[2], u[3], u[4], 0.0, 0.0, u[5], u[6]};
    };
    const std::vector<double> &b = best->x;
    LevenbergMarquardtResult symmetric = levenberg_marquardt(
        [&](const std::vector<double> &u, std::vector<double> &out) { residuals(with_zero_skew(u), out); },
        std::vector<double>{b[0], b[1], b[2], b[3], b[4], b[7], b[8]});
    symmetric.x = with_zero_skew(symmetric.x);
    consider(symmetric);

    SkewGaussianFit fit;
    fit.params = detail::decode_skew(best->x, scale);
    fit.sse = best->value * scale * scale;
    fit.constant_sse = constant_sse;
    if (!(fit.sse <= constant_sse)) {
        fit.params = SkewGaussianParams{};
        fit.params.mu = {gx, gy};
        fit.params.amp = 0.0;
        fit.params.offset = mean;
        fit.sse = constant_sse;
    }
    return fit;
}

/// Numerical maximization of f from mu and from an optional extra seed
/// (normally the best grid node), restricted to the domain box when one is
/// given; widths come from the covariance S^{-1}. A singular S yields the
/// fallback widths.
inline LandscapeOptimum locate_maximum(const SkewGaussianParams &params, std::optional<std::array<double, 2>> seed = {},
                                       std::array<double, 2> fallback_widths = {1.0, 1.0},
                                       std::optional<GridSpec> domain = std::nullopt) {
    auto project = [&](std::vector<double> x) {
        if (domain) {
            x[0] = std::clamp(x[0], domain->log_gamma_min, domain->log_gamma_max);
            x[1] = std::clamp(x[1], domain->log_beta_min, domain->log_beta_max);
        }
        return x;
    };
    auto negative = [&](const std::vector<double> &x) {
        const auto y = project(x);
        return -params(y[0], y[1]);
    };
    NelderMeadOptions nm;
    nm.max_iterations = 4000;
    nm.x_tolerance = 1e-11;
    nm.f_tolerance = 0.0;

    const double det = params.sigma_inv_determinant();
    const bool singular = !(det > 1e-12 * std::max(1.0, params.sigma_inv[0] * params.sigma_inv[2])) ||
                          !std::isfinite(det);
    double wg = fallback_widths[0];
    double wb = fallback_widths[1];
    if (!singular) {
        wg = std::sqrt(params.sigma_inv[2] / det);
        wb = std::sqrt(params.sigma_inv[0] / det);
    }
    const std::vector<double> steps = {std::max(1e-3, 0.25 * wg), std::max(1e-3, 0.25 * wb)};

    NelderMeadResult best = nelder_mead(negative, {params.mu[0], params.mu[1]}, steps, nm);
    if (seed) {
        NelderMeadResult other = nelder_mead(negative, {(*seed)[0], (*seed)[1]}, steps, nm);
        if (other.value < best.value) best = std::move(other);
    }
    best.x = project(best.x);

    // The simplex resolves x only to about sqrt(eps) on a flat top; finish
    // with Newton steps on a central-difference gradient.
    for (int it = 0; it < 8; ++it) {
        const double x = best.x[0], y = best.x[1];
        const double h = 1e-4 * std::max({1e-3, std::min(wg, wb)});
        const double f0 = params(x, y);
        const double fxp = params(x + h, y), fxm = params(x - h, y);
        const double fyp = params(x, y + h), fym = params(x, y - h);
        const double gx = (fxp - fxm) / (2 * h), gy = (fyp - fym) / (2 * h);
        const double hxx = (fxp - 2 * f0 + fxm) / (h * h), hyy = (fyp - 2 * f0 + fym) / (h * h);
        const double hxy =
            (params(x + h, y + h) - params(x + h, y - h) - params(x - h, y + h) + params(x - h, y - h)) / (4 * h * h);
        const double hdet = hxx * hyy - hxy * hxy;
        if (!(hxx < 0.0) || !(hdet > 0.0)) break;  // not locally concave
        const std::vector<double> next =
            project({x - (hyy * gx - hxy * gy) / hdet, y - (hxx * gy - hxy * gx) / hdet});
        if (!(params(next[0], next[1]) >= f0)) break;
        const double moved = std::abs(next[0] - x) + std::abs(next[1] - y);
        best.x = next;
        if (moved < 1e-13) break;
    }

    LandscapeOptimum opt;
    opt.log_gamma_opt = best.x[0];
    opt.log_beta_opt = best.x[1];
    opt.p_opt_max = params(best.x[0], best.x[1]);
    opt.width_gamma = wg;
    opt.width_beta = wb;
    opt.from_fit = true;
    return opt;
}

/// Grid for the next sub-size, centred on the optimum with half-widths
/// s_gamma, s_beta.
inline GridSpec reduce_grid(const LandscapeOptimum &opt, int resolution = 11) {
    require(opt.width_gamma > 0.0 && opt.width_beta > 0.0, ErrorCode::InvalidArgument,
            "grid reduction needs positive widths");
    GridSpec spec{opt.log_gamma_opt - opt.width_gamma, opt.log_gamma_opt + opt.width_gamma,
                  opt.log_beta_opt - opt.width_beta, opt.log_beta_opt + opt.width_beta, resolution};
    spec.validate();
    return spec;
}

inline constexpr double kMinGridHalfWidth = 1e-3;

/// Raw grid argmax with half the current spans as widths.
inline LandscapeOptimum grid_argmax_optimum(const GridSearchLandscape &landscape) {
    const std::size_t k = landscape.argmax();
    const int res = landscape.spec.resolution;
    LandscapeOptimum opt;
    opt.log_gamma_opt = landscape.spec.gamma_at(static_cast<int>(k) / res);
    opt.log_beta_opt = landscape.spec.beta_at(static_cast<int>(k) % res);
    opt.p_opt_max = landscape.mean_p_opt[k];
    opt.width_gamma = 0.5 * landscape.spec.gamma_span();
    opt.width_beta = 0.5 * landscape.spec.beta_span();
    opt.from_fit = false;
    return opt;
}

/// Fit, locate, and fall back to the grid argmax when the fit fails or its
/// maximum does not rise above the fitted offset.
inline LandscapeOptimum optimize_landscape(const GridSearchLandscape &landscape, const SkewFitOptions &options = {}) {
    const auto fit = fit_skew_gaussian(landscape, options);
    const LandscapeOptimum raw = grid_argmax_optimum(landscape);
    if (!fit || !(fit->params.amp > 0.0)) return raw;
    LandscapeOptimum opt = locate_maximum(fit->params, std::array<double, 2>{raw.log_gamma_opt, raw.log_beta_opt},
                                          {raw.width_gamma, raw.width_beta}, landscape.spec);
    if (!(opt.p_opt_max > fit->params.offset) || !std::isfinite(opt.log_gamma_opt) ||
        !std::isfinite(opt.log_beta_opt) || !std::isfinite(opt.width_gamma) || !std::isfinite(opt.width_beta)) {
        return raw;
    }
    // A width the window cannot resolve is capped at the window half-span.
    opt.width_gamma = std::clamp(opt.width_gamma, kMinGridHalfWidth, raw.width_gamma);
    opt.width_beta = std::clamp(opt.width_beta, kMinGridHalfWidth, raw.width_beta);
    opt.p_opt_max = std::min(1.0, opt.p_opt_max);
    return opt;
}

}  // namespace lrqaoa

#endif  // LRQAOA_SKEW_GAUSSIAN_HPP
