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

#ifndef LRQAOA_LANDSCAPE_HPP
#define LRQAOA_LANDSCAPE_HPP

#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lrqaoa/error.hpp"
#include "lrqaoa/parallel.hpp"
#include "lrqaoa/qubo.hpp"
#include "lrqaoa/schedule.hpp"
#include "lrqaoa/simulator.hpp"

namespace lrqaoa {

/// Square grid over (log10 dgamma, log10 dbeta).
struct GridSpec {
    double log_gamma_min = -1.0;
    double log_gamma_max = 1.0;
    double log_beta_min = -1.5;
    double log_beta_max = 0.5;
    int resolution = 11;

    void validate() const {
        require(std::isfinite(log_gamma_min) && std::isfinite(log_gamma_max) && std::isfinite(log_beta_min) &&
                    std::isfinite(log_beta_max),
                ErrorCode::InvalidArgument, "grid bounds must be finite");
        require(log_gamma_min < log_gamma_max && log_beta_min < log_beta_max, ErrorCode::InvalidArgument,
                "grid bounds must satisfy min < max on both axes");
        require(resolution >= 2, ErrorCode::InvalidArgument, "grid resolution must be at least 2");
    }

    double gamma_at(int i) const {
        return log_gamma_min + (log_gamma_max - log_gamma_min) * i / static_cast<double>(resolution - 1);
    }
    double beta_at(int j) const {
        return log_beta_min + (log_beta_max - log_beta_min) * j / static_cast<double>(resolution - 1);
    }
    double gamma_span() const { return log_gamma_max - log_gamma_min; }
    double beta_span() const { return log_beta_max - log_beta_min; }
    std::size_t nodes() const { return static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution); }

    bool operator==(const GridSpec &) const = default;
};

/// Mean success probability per grid node; node (i, j) has gamma index i and
/// beta index j and lives at i * resolution + j.
struct GridSearchLandscape {
    GridSpec spec;
    int p = 0;
    std::vector<double> mean_p_opt;
    std::vector<std::vector<double>> per_instance_p_opt;  // [instance][node], empty unless kept

    double at(int i, int j) const { return mean_p_opt[static_cast<std::size_t>(i * spec.resolution + j)]; }

    std::size_t argmax() const {
        std::size_t best = 0;
        for (std::size_t k = 1; k < mean_p_opt.size(); ++k) {
            if (mean_p_opt[k] > mean_p_opt[best]) best = k;
        }
        return best;
    }
};

/// Arithmetic mean in instance order; fixed summation order keeps the
/// result independent of how nodes were scheduled.
inline std::vector<double> aggregate_mean(const std::vector<std::vector<double>> &per_instance) {
    if (per_instance.empty()) return {};
    std::vector<double> mean(per_instance.front().size(), 0.0);
    for (const auto &row : per_instance) {
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += row[k];
    }
    for (double &m : mean) m /= static_cast<double>(per_instance.size());
    return mean;
}

inline GridSearchLandscape run_grid_search(std::span<const PreparedInstance> instances, const GridSpec &spec, int p,
                                           bool keep_per_instance = false, unsigned threads = 0) {
    spec.validate();
    require(!instances.empty(), ErrorCode::InvalidArgument, "grid search needs at least one sub-instance");
    require(p >= 1, ErrorCode::InvalidArgument, "grid search needs p >= 1");
    const std::size_t nodes = spec.nodes();
    std::vector<std::vector<double>> per(instances.size(), std::vector<double>(nodes));
    parallel_for(
        nodes,
        [&](std::size_t node) {
            const int i = static_cast<int>(node) / spec.resolution;
            const int j = static_cast<int>(node) % spec.resolution;
            const auto schedule = build_schedule(std::pow(10.0, spec.gamma_at(i)), std::pow(10.0, spec.beta_at(j)), p);
            for (std::size_t k = 0; k < instances.size(); ++k) {
                per[k][node] = success_probability(instances[k], schedule).p_opt;
            }
        },
        threads);
    GridSearchLandscape landscape{spec, p, aggregate_mean(per), {}};
    if (keep_per_instance) landscape.per_instance_p_opt = std::move(per);
    return landscape;
}

inline GridSearchLandscape run_grid_search(std::span<const QuboInstance> instances, const GridSpec &spec, int p,
                                           bool keep_per_instance = false) {
    std::vector<PreparedInstance> prepared;
    prepared.reserve(instances.size());
    for (const auto &inst : instances) prepared.push_back(PreparedInstance::from(inst));
    return run_grid_search(std::span<const PreparedInstance>(prepared), spec, p, keep_per_instance);
}

inline void write_landscape_csv(std::ostream &out, const GridSearchLandscape &landscape) {
    out << "log_dgamma,log_dbeta,mean_p_opt\n";
    out.precision(17);
    for (int i = 0; i < landscape.spec.resolution; ++i) {
        for (int j = 0; j < landscape.spec.resolution; ++j) {
            out << landscape.spec.gamma_at(i) << ',' << landscape.spec.beta_at(j) << ',' << landscape.at(i, j) << '\n';
        }
    }
}

}  // namespace lrqaoa

#endif  // LRQAOA_LANDSCAPE_HPP
