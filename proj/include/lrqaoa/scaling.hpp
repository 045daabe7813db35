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

#ifndef LRQAOA_SCALING_HPP
#define LRQAOA_SCALING_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrqaoa/baseline.hpp"
#include "lrqaoa/error.hpp"
#include "lrqaoa/extrapolate.hpp"

namespace lrqaoa {

enum class ScalingMethod { RobustTheilSen, OlsOnGeomean };

inline const char *to_string(ScalingMethod m) {
    return m == ScalingMethod::RobustTheilSen ? "theil_sen" : "ols_geomean";
}

/// log2(T) = alpha * n + intercept, i.e. T ~ 2^(alpha n).
struct ScalingFit {
    double alpha = 0.0;
    double intercept = 0.0;
    ScalingMethod method = ScalingMethod::RobustTheilSen;
    std::size_t points_used = 0;
    std::size_t excluded = 0;  // unsolved or infinite records left out
    double residual = 0.0;     // sum of squared log2 residuals
};

/// p = a * N^b.
struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double residual = 0.0;  // sum of squared log10 residuals
};

inline double median(std::vector<double> values) {
    require(!values.empty(), ErrorCode::InvalidArgument, "median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

/// Median of all pairwise slopes between points with distinct x; the
/// intercept is the median of y - slope * x.
inline LogLogFit theil_sen(std::span<const std::pair<double, double>> points) {
    std::vector<double> slopes;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double dx = points[j].first - points[i].first;
            if (dx != 0.0) slopes.push_back((points[j].second - points[i].second) / dx);
        }
    }
    require(!slopes.empty(), ErrorCode::InvalidArgument, "Theil-Sen needs at least two distinct x values");
    LogLogFit fit;
    fit.slope = median(slopes);
    std::vector<double> offsets;
    for (const auto &[x, y] : points) offsets.push_back(y - fit.slope * x);
    fit.intercept = median(offsets);
    for (const auto &[x, y] : points) fit.residual += (y - fit.at(x)) * (y - fit.at(x));
    return fit;
}

inline std::size_t distinct_sizes(const std::vector<std::pair<double, double>> &points) {
    std::set<double> xs;
    for (const auto &pt : points) xs.insert(pt.first);
    return xs.size();
}

/// Theil-Sen on (n, log2 of the per-instance median over repetitions), using
/// optimally solved records only.
inline ScalingFit fit_scaling_robust(std::span<const RuntimeRecord> records) {
    std::map<std::pair<std::size_t, std::string>, std::vector<double>> per_instance;
    ScalingFit fit;
    fit.method = ScalingMethod::RobustTheilSen;
    for (const auto &r : records) {
        if (!r.solved_optimally || !std::isfinite(r.runtime_or_depth) || !(r.runtime_or_depth > 0.0)) {
            ++fit.excluded;
            continue;
        }
        per_instance[{r.n, r.instance_label}].push_back(r.runtime_or_depth);
    }
    std::vector<std::pair<double, double>> points;
    for (const auto &[key, values] : per_instance) {
        points.emplace_back(static_cast<double>(key.first), std::log2(median(values)));
    }
    require(distinct_sizes(points) >= 3, ErrorCode::InvalidArgument,
            "robust scaling fit needs at least 3 sizes with optimally solved records");
    const LogLogFit line = theil_sen(points);
    fit.alpha = line.slope;
    fit.intercept = line.intercept;
    fit.residual = line.residual;
    fit.points_used = points.size();
    return fit;
}

/// OLS on (n, log2 of the per-size geometric mean); infinite or
/// nonpositive values are excluded and counted.
inline ScalingFit fit_scaling_geomean(std::span<const RuntimeRecord> records) {
    std::map<std::size_t, std::vector<double>> per_size;
    ScalingFit fit;
    fit.method = ScalingMethod::OlsOnGeomean;
    for (const auto &r : records) {
        if (!std::isfinite(r.runtime_or_depth) || !(r.runtime_or_depth > 0.0)) {
            ++fit.excluded;
            continue;
        }
        per_size[r.n].push_back(std::log2(r.runtime_or_depth));
    }
    std::vector<std::pair<double, double>> points;
    for (const auto &[n, logs] : per_size) {
        double mean = 0.0;
        for (double v : logs) mean += v;
        points.emplace_back(static_cast<double>(n), mean / static_cast<double>(logs.size()));
    }
    require(points.size() >= 3, ErrorCode::InvalidArgument, "geometric-mean scaling fit needs at least 3 sizes");
    const LogLogFit line = fit_line(points);
    fit.alpha = line.slope;
    fit.intercept = line.intercept;
    fit.residual = line.residual;
    fit.points_used = points.size();
    return fit;
}

inline double geometric_mean(std::span<const double> values) {
    require(!values.empty(), ErrorCode::InvalidArgument, "geometric mean of an empty set");
    double total = 0.0;
    for (double v : values) {
        require(v > 0.0, ErrorCode::InvalidArgument, "geometric mean needs positive values");
        total += std::log(v);
    }
    return std::exp(total / static_cast<double>(values.size()));
}

/// OLS of log10(value) on log10(n).
inline PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
    std::vector<std::pair<double, double>> logs;
    for (const auto &[n, v] : points) {
        require(v > 0.0 && n > 0.0, ErrorCode::InvalidArgument, "power-law fit needs positive sizes and values");
        logs.emplace_back(std::log10(n), std::log10(v));
    }
    const LogLogFit line = fit_line(logs);
    return PowerLawFit{std::pow(10.0, line.intercept), line.slope, line.residual};
}

}  // namespace lrqaoa

#endif  // LRQAOA_SCALING_HPP
