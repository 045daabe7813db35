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

#ifndef LRQAOA_EXTRAPOLATE_HPP
#define LRQAOA_EXTRAPOLATE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrqaoa/error.hpp"

namespace lrqaoa {

/// Optimum of one sub-size in log10 units.
struct SubSizeOptimum {
    int size = 0;
    double log_gamma_opt = 0.0;
    double log_beta_opt = 0.0;
    double log_p_opt_max = 0.0;
};

/// y = slope * x + intercept, residual is the sum of squared errors.
struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;

    double at(double x) const { return slope * x + intercept; }
};

struct ExtrapolationResult {
    double delta_gamma_extr = 0.0;
    double delta_beta_extr = 0.0;
    double p_opt_extr = 0.0;
    LogLogFit gamma_fit;
    LogLogFit beta_fit;
    LogLogFit p_opt_fit;
    int p = 0;
    int target_size = 0;
    bool p_opt_clamped = false;  // raw extrapolation exceeded 1
};

/// Ordinary least squares on (x, y) pairs.
inline LogLogFit fit_line(std::span<const std::pair<double, double>> points) {
    std::set<double> distinct;
    for (const auto &[x, y] : points) {
        require(std::isfinite(x) && std::isfinite(y), ErrorCode::InvalidArgument, "fit points must be finite");
        distinct.insert(x);
    }
    require(distinct.size() >= 2, ErrorCode::InvalidArgument, "line fit needs at least two distinct x values");
    const double m = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto &[x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (const auto &[x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (const auto &[x, y] : points) {
        const double r = y - fit.at(x);
        fit.residual += r * r;
    }
    return fit;
}

/// OLS of y against log10(size). The caller supplies y already in log10 form.
inline LogLogFit fit_loglog(std::span<const std::pair<double, double>> size_and_log_value) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(size_and_log_value.size());
    for (const auto &[size, y] : size_and_log_value) {
        require(size > 0.0, ErrorCode::InvalidArgument, "sizes must be positive");
        pts.emplace_back(std::log10(size), y);
    }
    return fit_line(pts);
}

/// Evaluates the three fitted lines at log10(target_size).
inline ExtrapolationResult extrapolate_params(std::span<const SubSizeOptimum> optima, int target_size, int p) {
    require(!optima.empty(), ErrorCode::InvalidArgument, "extrapolation needs sub-size optima");
    int largest = 0;
    std::vector<std::pair<double, double>> g, b, po;
    for (const auto &o : optima) {
        require(o.size >= 2, ErrorCode::InvalidArgument, "sub-sizes must be at least 2");
        largest = std::max(largest, o.size);
        g.emplace_back(o.size, o.log_gamma_opt);
        b.emplace_back(o.size, o.log_beta_opt);
        po.emplace_back(o.size, o.log_p_opt_max);
    }
    require(target_size > largest, ErrorCode::InvalidArgument,
            "target size " + std::to_string(target_size) + " must exceed the largest sub-size " + std::to_string(largest));
    ExtrapolationResult r;
    r.gamma_fit = fit_loglog(g);
    r.beta_fit = fit_loglog(b);
    r.p_opt_fit = fit_loglog(po);
    const double x = std::log10(static_cast<double>(target_size));
    r.delta_gamma_extr = std::pow(10.0, r.gamma_fit.at(x));
    r.delta_beta_extr = std::pow(10.0, r.beta_fit.at(x));
    const double raw = std::pow(10.0, r.p_opt_fit.at(x));
    r.p_opt_clamped = raw > 1.0;
    r.p_opt_extr = std::clamp(raw, std::numeric_limits<double>::min(), 1.0);
    r.p = p;
    r.target_size = target_size;
    return r;
}

/// One row per sub-size plus the extrapolated row, in the layout
/// instance,p,size,log_gamma,log_beta,log_p_opt,is_extrapolated.
inline void write_extrapolation_rows(std::ostream &out, const std::string &instance,
                                     std::span<const SubSizeOptimum> optima, const ExtrapolationResult &r) {
    out.precision(17);
    for (const auto &o : optima) {
        out << instance << ',' << r.p << ',' << o.size << ',' << o.log_gamma_opt << ',' << o.log_beta_opt << ','
            << o.log_p_opt_max << ",0\n";
    }
    out << instance << ',' << r.p << ',' << r.target_size << ',' << std::log10(r.delta_gamma_extr) << ','
        << std::log10(r.delta_beta_extr) << ',' << std::log10(r.p_opt_extr) << ",1\n";
}

inline constexpr const char *kExtrapolationHeader = "instance,p,size,log_gamma,log_beta,log_p_opt,is_extrapolated";

}  // namespace lrqaoa

#endif  // LRQAOA_EXTRAPOLATE_HPP
