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

#include <gtest/gtest.h>

#include "lrqaoa/scaling.hpp"

using namespace lrqaoa;

namespace {

std::vector<RuntimeRecord> planted(double alpha, double base, int n_min, int n_max) {
    std::vector<RuntimeRecord> out;
    for (int n = n_min; n <= n_max; ++n) {
        for (int k = 0; k < 3; ++k) {
            out.push_back({static_cast<std::size_t>(n), "i" + std::to_string(k), 0, base * std::exp2(alpha * n), true, 0});
        }
    }
    return out;
}

double ols_slope(const std::vector<std::pair<double, double>> &pts) { return fit_line(pts).slope; }

}  // namespace

TEST(robust_fit, planted_exponent) {
    const ScalingFit f = fit_scaling_robust(planted(0.3, 1e-4, 10, 20));
    EXPECT_NEAR(f.alpha, 0.3, 1e-9);
    EXPECT_NEAR(f.intercept, std::log2(1e-4), 1e-9);
    EXPECT_EQ(f.method, ScalingMethod::RobustTheilSen);
    EXPECT_EQ(f.points_used, 33u);
}

TEST(robust_fit, outlier_moves_theil_sen_less_than_ols) {
    std::vector<std::pair<double, double>> pts;
    for (int n = 10; n < 20; ++n) pts.emplace_back(n, 0.3 * n + 1.0);
    pts[7].second += 6.0;
    const double ts = theil_sen(pts).slope;
    const double ols = ols_slope(pts);
    EXPECT_LT(std::abs(ts - 0.3), std::abs(ols - 0.3));
}

TEST(robust_fit, unsolved_records_are_excluded) {
    auto records = planted(0.3, 1.0, 10, 14);
    records[0].solved_optimally = false;
    records[1].runtime_or_depth = std::numeric_limits<double>::infinity();
    const ScalingFit f = fit_scaling_robust(records);
    EXPECT_EQ(f.excluded, 2u);
    EXPECT_NEAR(f.alpha, 0.3, 1e-9);
}

TEST(robust_fit, needs_three_sizes) { EXPECT_THROW(fit_scaling_robust(planted(0.3, 1.0, 10, 11)), Error); }

TEST(robust_fit, median_over_repetitions) {
    std::vector<RuntimeRecord> records;
    for (int n : {10, 12, 14}) {
        for (int rep = 0; rep < 3; ++rep) {
            const double noise = rep == 2 ? 100.0 : 1.0;  // one slow repetition per instance
            records.push_back({static_cast<std::size_t>(n), "x", rep, std::exp2(0.5 * n) * noise, true, 0});
        }
    }
    EXPECT_NEAR(fit_scaling_robust(records).alpha, 0.5, 1e-9);
}

TEST(geomean_fit, planted_exponent) {
    const ScalingFit f = fit_scaling_geomean(planted(0.22, 30.0, 12, 28));
    EXPECT_NEAR(f.alpha, 0.22, 1e-9);
    EXPECT_EQ(f.method, ScalingMethod::OlsOnGeomean);
    EXPECT_LT(f.residual, 1e-18);
}

TEST(geomean_fit, excluded_count_surfaces) {
    auto records = planted(0.22, 1.0, 12, 16);
    records[4].runtime_or_depth = std::numeric_limits<double>::infinity();
    const ScalingFit f = fit_scaling_geomean(records);
    EXPECT_EQ(f.excluded, 1u);
    EXPECT_NEAR(f.alpha, 0.22, 1e-9);
}

TEST(geometric_mean, basics) {
    const std::vector<double> v{2.0, 8.0};
    EXPECT_DOUBLE_EQ(geometric_mean(v), 4.0);
    const std::vector<double> bad{1.0, 0.0};
    EXPECT_THROW(geometric_mean(bad), Error);
}

TEST(power_law, planted_cubic) {
    std::vector<std::pair<double, double>> pts;
    for (int n = 12; n <= 28; ++n) pts.emplace_back(n, 2.0 * n * n * n);
    const PowerLawFit f = fit_power_law(pts);
    EXPECT_NEAR(f.a, 2.0, 1e-9);
    EXPECT_NEAR(f.b, 3.0, 1e-9);
}

TEST(power_law, constant_data) {
    std::vector<std::pair<double, double>> pts{{12, 5}, {14, 5}, {16, 5}};
    EXPECT_NEAR(fit_power_law(pts).b, 0.0, 1e-12);
}
