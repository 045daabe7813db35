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

#include <random>

#include "lrqaoa/skew_gaussian.hpp"

using namespace lrqaoa;

namespace {

GridSearchLandscape sample(const SkewGaussianParams &f, const GridSpec &g = {}) {
    GridSearchLandscape land{g, 1, std::vector<double>(g.nodes()), {}};
    for (int i = 0; i < g.resolution; ++i) {
        for (int j = 0; j < g.resolution; ++j) land.mean_p_opt[i * g.resolution + j] = f(g.gamma_at(i), g.beta_at(j));
    }
    return land;
}

}  // namespace

TEST(skew_gaussian, symmetric_fit_recovers_peak) {
    SkewGaussianParams truth;
    truth.mu = {0.0, -0.5};
    truth.sigma_inv = {4.0, 0.0, 4.0};
    truth.amp = 2.0;
    const auto fit = fit_skew_gaussian(sample(truth));
    ASSERT_TRUE(fit.has_value());
    EXPECT_NEAR(fit->params(0.0, -0.5), 1.0, 1e-6);
    const LandscapeOptimum opt = optimize_landscape(sample(truth));
    EXPECT_TRUE(opt.from_fit);
    EXPECT_NEAR(opt.log_gamma_opt, 0.0, 1e-6);
    EXPECT_NEAR(opt.log_beta_opt, -0.5, 1e-6);
    EXPECT_NEAR(opt.p_opt_max, 1.0, 1e-6);
}

TEST(skew_gaussian, skewed_noisy_fit_recovers_argmax) {
    SkewGaussianParams truth;
    truth.mu = {0.1, -0.6};
    truth.sigma_inv = {3.0, 0.5, 5.0};
    truth.alpha = {3.0, 0.0};
    truth.amp = 0.2;
    truth.offset = 0.01;
    const LandscapeOptimum target = locate_maximum(truth);
    GridSearchLandscape land = sample(truth);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> noise(0.0, 0.01 * truth.amp);
    for (double &v : land.mean_p_opt) v += noise(rng);
    const LandscapeOptimum opt = optimize_landscape(land);
    EXPECT_NEAR(opt.log_gamma_opt, target.log_gamma_opt, 0.1);
    EXPECT_NEAR(opt.log_beta_opt, target.log_beta_opt, 0.1);
}

TEST(skew_gaussian, constant_landscape_falls_back) {
    GridSearchLandscape land{GridSpec{}, 1, std::vector<double>(121, 0.3), {}};
    EXPECT_FALSE(fit_skew_gaussian(land).has_value());
    const LandscapeOptimum opt = optimize_landscape(land);
    EXPECT_FALSE(opt.from_fit);
    EXPECT_DOUBLE_EQ(opt.width_gamma, 1.0);
    EXPECT_DOUBLE_EQ(opt.width_beta, 1.0);
}

TEST(locate_maximum, symmetric_peak_is_mu) {
    SkewGaussianParams f;
    f.mu = {0.37, -0.81};
    f.sigma_inv = {2.0, 0.3, 1.5};
    f.amp = 1.0;
    const LandscapeOptimum opt = locate_maximum(f);
    EXPECT_NEAR(opt.log_gamma_opt, 0.37, 1e-8);
    EXPECT_NEAR(opt.log_beta_opt, -0.81, 1e-8);
}

TEST(locate_maximum, isotropic_widths) {
    SkewGaussianParams f;
    f.amp = 1.0;
    const LandscapeOptimum opt = locate_maximum(f);
    EXPECT_DOUBLE_EQ(opt.width_gamma, 1.0);
    EXPECT_DOUBLE_EQ(opt.width_beta, 1.0);
}

TEST(locate_maximum, widths_from_inverse) {
    SkewGaussianParams f;
    f.amp = 1.0;
    f.sigma_inv = {2.0, 1.0, 3.0};  // inverse is [[3, -1], [-1, 2]] / 5
    const LandscapeOptimum opt = locate_maximum(f);
    EXPECT_NEAR(opt.width_gamma, std::sqrt(3.0 / 5.0), 1e-15);
    EXPECT_NEAR(opt.width_beta, std::sqrt(2.0 / 5.0), 1e-15);
}

TEST(locate_maximum, domain_keeps_maximum_inside) {
    SkewGaussianParams f;
    f.mu = {3.0, 0.0};
    f.amp = 1.0;
    const LandscapeOptimum opt = locate_maximum(f, {}, {1.0, 1.0}, GridSpec{});
    EXPECT_NEAR(opt.log_gamma_opt, 1.0, 1e-9);
    EXPECT_NEAR(opt.log_beta_opt, 0.0, 1e-6);
}

TEST(reduce_grid, arithmetic) {
    LandscapeOptimum opt;
    opt.log_gamma_opt = 0.2;
    opt.log_beta_opt = -0.3;
    opt.width_gamma = 0.5;
    opt.width_beta = 0.25;
    const GridSpec g = reduce_grid(opt);
    EXPECT_NEAR(g.log_gamma_min, -0.3, 1e-15);
    EXPECT_NEAR(g.log_gamma_max, 0.7, 1e-15);
    EXPECT_NEAR(g.log_beta_min, -0.55, 1e-15);
    EXPECT_NEAR(g.log_beta_max, -0.05, 1e-15);
    EXPECT_NEAR(0.5 * (g.log_gamma_min + g.log_gamma_max), opt.log_gamma_opt, 1e-15);
    EXPECT_NEAR(0.5 * (g.log_beta_min + g.log_beta_max), opt.log_beta_opt, 1e-15);
    EXPECT_EQ(g.resolution, 11);
}

TEST(reduce_grid, chained_twice_stays_ordered) {
    SkewGaussianParams f;
    f.mu = {0.2, -0.4};
    f.sigma_inv = {6.0, 1.0, 4.0};
    f.alpha = {1.0, -1.0};
    f.amp = 0.3;
    GridSpec g;
    for (int round = 0; round < 2; ++round) {
        g = reduce_grid(optimize_landscape(sample(f, g)));
        EXPECT_TRUE(std::isfinite(g.log_gamma_min) && std::isfinite(g.log_beta_max));
        EXPECT_LT(g.log_gamma_min, g.log_gamma_max);
        EXPECT_LT(g.log_beta_min, g.log_beta_max);
    }
}

TEST(reduce_grid, rejects_nonpositive_widths) {
    LandscapeOptimum opt;
    EXPECT_THROW(reduce_grid(opt), Error);
}
