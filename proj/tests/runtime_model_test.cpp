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

#include "lrqaoa/datasets.hpp"
#include "lrqaoa/runtime_model.hpp"

using namespace lrqaoa;

namespace {

QuboInstance portfolio_instance(int n, std::uint64_t seed) {
    const PortfolioData universe = generate_portfolio_universe(30, 1);
    const PortfolioData d = universe.select(sample_indices(30, static_cast<std::size_t>(n), seed));
    return build_portfolio_qubo(d, n / 2, flip_bound_penalty(d), "pf" + std::to_string(n) + "-" + std::to_string(seed));
}

ChainConfig small_chain() {
    ChainConfig c;
    c.sub_sizes = {4, 6, 8};
    c.sub_instances_per_size = 4;
    return c;
}

}  // namespace

TEST(p_grid, first_entries) {
    const std::vector<int> g = p_grid(60);
    const std::vector<int> head(g.begin(), g.begin() + 15);
    EXPECT_EQ(head, (std::vector<int>{1, 2, 3, 4, 5, 6, 8, 9, 11, 13, 16, 19, 22, 26, 32}));
    EXPECT_TRUE(std::adjacent_find(g.begin(), g.end(), std::greater_equal<int>()) == g.end());
    EXPECT_NE(std::find(g.begin(), g.end(), 8), g.end());
    EXPECT_EQ(g.back(), 32768);
}

TEST(circuit_depth, default_model) {
    EXPECT_EQ(circuit_depth(1, 1), 2.0);
    EXPECT_EQ(circuit_depth(12, 20), 2.0 * circuit_depth(12, 10));
    EXPECT_DOUBLE_EQ(circuit_depth(28, 128) / circuit_depth(14, 128), 29.0 / 15.0);
    DepthModel linear{3.0};
    EXPECT_EQ(circuit_depth(10, 2, linear), 60.0);
    EXPECT_THROW(circuit_depth(0, 1), Error);
}

TEST(shots, closed_forms) {
    EXPECT_EQ(median_shots(0.5).n_shots, 1.0);
    EXPECT_EQ(median_shots(0.75).n_shots, 0.5);
    EXPECT_NEAR(median_shots(0.1).n_shots, 6.578813478960585, 1e-12);
    EXPECT_NEAR(median_shots(0.1).n_shots, std::log(0.5) / std::log(0.9), 1e-12);
    EXPECT_EQ(mean_shots(0.25).n_shots, 4.0);
}

TEST(shots, strictly_decreasing_in_probability) {
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 100; ++k) {
        const double s = median_shots(k / 101.0).n_shots;
        EXPECT_LT(s, previous);
        previous = s;
    }
}

TEST(shots, clamps_extremes) {
    EXPECT_TRUE(median_shots(0.0).clamped);
    EXPECT_TRUE(std::isfinite(median_shots(0.0).n_shots));
    EXPECT_TRUE(median_shots(1.0).clamped);
    EXPECT_GT(median_shots(1.0).n_shots, 0.0);
    EXPECT_FALSE(median_shots(0.3).clamped);
}

TEST(descend_grid, planted_convex_trace) {
    const std::vector<int> grid = p_grid(60);
    const std::size_t at8 = DepthOptimizer::snap_to_grid(grid, 8);
    ASSERT_EQ(grid[at8], 8);
    auto convex = [&](std::size_t k) {
        const double d = static_cast<double>(k) - static_cast<double>(at8);
        return 100.0 + d * d;
    };
    for (int start : {3, 16}) {
        std::vector<std::size_t> visited;
        const std::size_t k = descend_grid(grid.size(), DepthOptimizer::snap_to_grid(grid, start), [&](std::size_t i) {
            visited.push_back(i);
            return convex(i);
        });
        EXPECT_EQ(grid[k], 8) << "start " << start;
        std::sort(visited.begin(), visited.end());
        EXPECT_EQ(std::adjacent_find(visited.begin(), visited.end()), visited.end()) << "re-evaluated a depth";
    }
}

TEST(descend_grid, result_is_local_minimum) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(20);
        for (double &x : v) x = u(rng);
        const std::size_t start = trial % 20;
        const std::size_t k = descend_grid(v.size(), start, [&](std::size_t i) { return v[i]; });
        if (k > 0) {
            EXPECT_GE(v[k - 1], v[k]);
        }
        if (k + 1 < v.size()) {
            EXPECT_GE(v[k + 1], v[k]);
        }
    }
}

TEST(snap_to_grid, nearest_point) {
    const std::vector<int> grid = p_grid(30);
    EXPECT_EQ(grid[DepthOptimizer::snap_to_grid(grid, 7)], 6);
    EXPECT_EQ(grid[DepthOptimizer::snap_to_grid(grid, 0)], 1);
    EXPECT_EQ(grid[DepthOptimizer::snap_to_grid(grid, 1000)], grid.back());
}

TEST(depth_optimizer, full_evaluation_at_p6) {
    DepthOptimizer opt(portfolio_instance(12, 3), small_chain(), 11);
    const ChainRecord r = opt.estimate_total_depth(6);
    EXPECT_EQ(r.p, 6);
    EXPECT_EQ(r.optima.size(), 3u);
    EXPECT_TRUE(std::isfinite(r.d_est));
    EXPECT_GT(r.d_est, 0.0);
    EXPECT_GT(r.extrapolation.p_opt_extr, 0.0);
    EXPECT_LE(r.extrapolation.p_opt_extr, 1.0);
    EXPECT_EQ(r.grids.size(), 3u);
    EXPECT_EQ(r.grids.front(), GridSpec{});
}

TEST(depth_optimizer, estimate_is_linear_in_circuit_depth) {
    DepthOptimizer opt(portfolio_instance(12, 3), small_chain(), 11);
    const ChainRecord r = opt.estimate_total_depth(6);
    const double shots6 = median_shots(r.extrapolation.p_opt_extr).n_shots;
    EXPECT_DOUBLE_EQ(r.d_est, circuit_depth(12, 6) * shots6);
    // Doubling p at unchanged P_opt,extr doubles the estimate.
    EXPECT_DOUBLE_EQ(circuit_depth(12, 12) * shots6, 2.0 * r.d_est);
}

TEST(depth_optimizer, cache_hit_is_bit_identical) {
    ChainCache cache;
    const QuboInstance inst = portfolio_instance(10, 4);
    DepthOptimizer first(inst, small_chain(), 5, "h", &cache);
    const ChainRecord a = first.estimate_total_depth(4);
    EXPECT_EQ(cache.size(), 1u);
    DepthOptimizer second(inst, small_chain(), 5, "h", &cache);
    const ChainRecord b = second.estimate_total_depth(4);
    EXPECT_EQ(nlohmann::json(to_json(a)).dump(), nlohmann::json(to_json(b)).dump());
    EXPECT_EQ(a.d_est, b.d_est);
    // A fresh computation reproduces the cached record as well.
    DepthOptimizer third(inst, small_chain(), 5, "h");
    EXPECT_EQ(to_json(third.estimate_total_depth(4)).dump(), to_json(a).dump());
}

TEST(depth_optimizer, cache_round_trips_through_file) {
    const std::string path = ::testing::TempDir() + "/lrqaoa_chain_cache.json";
    std::remove(path.c_str());
    const QuboInstance inst = portfolio_instance(10, 4);
    ChainRecord a;
    {
        ChainCache cache(path);
        DepthOptimizer opt(inst, small_chain(), 5, "h", &cache);
        a = opt.estimate_total_depth(3);
        cache.save();
    }
    ChainCache reloaded(path);
    const auto hit = reloaded.find(ChainCache::key(inst.label(), 3, "h"));
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(to_json(*hit).dump(), to_json(a).dump());
}

TEST(depth_optimizer, descent_reaches_local_minimum) {
    DepthOptimizer opt(portfolio_instance(10, 8), small_chain(), 2);
    const DepthOptimizationResult r = opt.optimize_depth(6);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_EQ(r.trace.front().p, 6);
    const std::vector<int> grid = p_grid(60);
    const std::size_t k = DepthOptimizer::snap_to_grid(grid, r.p_star);
    for (std::size_t nb : {k - 1, k + 1}) {
        if (nb >= grid.size()) continue;
        const ChainRecord c = opt.estimate_total_depth(grid[nb]);
        EXPECT_GE(c.d_est, r.d_est) << "neighbour p=" << grid[nb];
    }
    EXPECT_GT(r.p_opt_realized, 0.0);
    EXPECT_DOUBLE_EQ(r.d_circuit, circuit_depth(10, r.p_star));
    EXPECT_DOUBLE_EQ(r.total_depth, r.d_circuit * median_shots(r.p_opt_realized).n_shots);
}

TEST(depth_optimizer, rejects_bad_sub_sizes) {
    ChainConfig c = small_chain();
    c.sub_sizes = {4, 12};
    EXPECT_THROW(DepthOptimizer(portfolio_instance(12, 1), c, 1), Error);
}
