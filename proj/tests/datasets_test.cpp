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

#include <numbers>
#include <set>
#include <sstream>

#include "lrqaoa/datasets.hpp"

using namespace lrqaoa;

namespace {

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

// Share of points whose cut side agrees with the generating label, up to
// swapping the two sides.
double label_agreement(std::uint64_t cut, const std::vector<int> &labels) {
    std::size_t same = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) same += ((cut >> i) & 1) == static_cast<std::uint64_t>(labels[i]);
    const std::size_t best = std::max(same, labels.size() - same);
    return static_cast<double>(best) / static_cast<double>(labels.size());
}

}  // namespace

TEST(portfolio_csv, round_trip) {
    PortfolioData d;
    d.names = {"A", "B"};
    d.mu = {0.1, 0.2};
    d.sigma = SquareMatrix(2);
    d.sigma.data = {1.0, 0.5, 0.5, 1.0};
    std::ostringstream out;
    write_portfolio_csv(out, d);
    const PortfolioData back = parse_portfolio_csv(lines_of(out.str()));
    EXPECT_EQ(back.names, d.names);
    EXPECT_EQ(back.mu, d.mu);
    EXPECT_EQ(back.sigma, d.sigma);
}

TEST(portfolio_csv, missing_column_names_row_and_column) {
    try {
        parse_portfolio_csv({"A,B", "0.1,0.2", "1,0.5", "0.5"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("row 4"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
    }
}

TEST(portfolio_csv, bad_number_names_cell) {
    try {
        parse_portfolio_csv({"A,B", "0.1,abc", "1,0.5", "0.5,1"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("column 2"), std::string::npos) << e.what();
    }
}

TEST(portfolio_csv, dimension_and_symmetry_errors) {
    try {
        parse_portfolio_csv({"A,B", "0.1,0.2", "1,0.5"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    try {
        parse_portfolio_csv({"A,B", "0.1,0.2", "1,0.5", "0.4,1"});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::AsymmetricMatrix);
    }
    // Differences within 1e-9 are symmetrized silently.
    const PortfolioData d = parse_portfolio_csv({"A,B", "0.1,0.2", "1,0.5", "0.5000000000001,1"});
    EXPECT_TRUE(d.sigma.is_symmetric());
}

TEST(portfolio_universe, selection_covers_all_assets) {
    const PortfolioData u = generate_portfolio_universe(30, 9);
    EXPECT_NO_THROW(u.validate());
    EXPECT_EQ(u.size(), 30u);
    std::vector<int> hits(30, 0);
    for (std::uint64_t s = 0; s < 200; ++s) {
        for (std::size_t i : sample_indices(30, 12, s)) ++hits[i];
    }
    // Each asset is drawn with probability 12/30: expect 80 of 200.
    for (int h : hits) {
        EXPECT_GT(h, 50);
        EXPECT_LT(h, 110);
    }
    const PortfolioData again = generate_portfolio_universe(30, 9);
    EXPECT_EQ(again.sigma, u.sigma);
    EXPECT_EQ(again.mu, u.mu);
}

TEST(portfolio_universe, covariance_is_positive_definite) {
    const PortfolioData u = generate_portfolio_universe(30, 2);
    // Cholesky succeeds only for a positive definite matrix.
    const std::size_t n = u.size();
    SquareMatrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = u.sigma(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                ASSERT_GT(s, 0.0);
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
}

TEST(features, identical_to_target) {
    FeatureTable t{{"f", "y"}, {{1, 2, 3, 5}, {1, 2, 3, 5}}};
    const FeatureIngest in = features_from_table(t);
    EXPECT_NEAR(in.data.rho_fy[0], 1.0, 1e-15);
}

TEST(features, duplicated_features) {
    FeatureTable t{{"a", "b", "y"}, {{1, 4, 2, 8}, {1, 4, 2, 8}, {0, 1, 0, 1}}};
    const FeatureIngest in = features_from_table(t);
    EXPECT_NEAR(in.data.rho_ff(0, 1), 1.0, 1e-15);
    EXPECT_EQ(in.data.rho_ff(0, 0), 0.0);
    EXPECT_EQ(in.feature_names, (std::vector<std::string>{"a", "b"}));
}

TEST(features, independent_columns_are_weakly_correlated) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    FeatureTable t;
    for (int c = 0; c < 6; ++c) {
        t.names.push_back("c" + std::to_string(c));
        std::vector<double> col(1000);
        for (double &v : col) v = g(rng);
        t.columns.push_back(col);
    }
    const FeatureIngest in = features_from_table(t);
    for (double r : in.data.rho_fy) EXPECT_LT(r, 0.15);
    for (double r : in.data.rho_ff.data) EXPECT_LT(r, 0.15);
}

TEST(features, constant_column_warns) {
    FeatureTable t{{"a", "k", "y"}, {{1, 2, 3}, {7, 7, 7}, {1, 0, 1}}};
    const FeatureIngest in = features_from_table(t);
    EXPECT_EQ(in.data.rho_fy[1], 0.0);
    EXPECT_EQ(in.data.rho_ff(0, 1), 0.0);
    ASSERT_EQ(in.warnings.size(), 1u);
    EXPECT_NE(in.warnings[0].find("'k'"), std::string::npos);
}

TEST(features, named_target_and_csv) {
    const FeatureTable t = generate_feature_table(6, 200, 4);
    EXPECT_EQ(t.names.size(), 7u);
    std::ostringstream out;
    write_feature_csv(out, t);
    const FeatureTable back = parse_feature_table(lines_of(out.str()));
    EXPECT_EQ(back.columns, t.columns);
    const FeatureIngest by_name = features_from_table(back, t.names.back());
    const FeatureIngest by_default = features_from_table(back);
    EXPECT_EQ(by_name.data.rho_fy, by_default.data.rho_fy);
    EXPECT_THROW(features_from_table(back, "nope"), Error);
    for (double r : by_default.data.rho_fy) {
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, 1.0);
    }
}

TEST(moons, noise_free_coordinates) {
    const ClusterData d = generate_moons(4, 0.0, 1);
    ASSERT_EQ(d.points.size(), 4u);
    const double pi = std::numbers::pi;
    const std::vector<Point2> expected{{std::cos(0.0), std::sin(0.0)},
                                       {std::cos(pi), std::sin(pi)},
                                       {1.0 - std::cos(0.0), 0.5 - std::sin(0.0)},
                                       {1.0 - std::cos(pi), 0.5 - std::sin(pi)}};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(d.points[i].x, expected[i].x, 1e-15);
        EXPECT_NEAR(d.points[i].y, expected[i].y, 1e-15);
    }
    EXPECT_EQ(d.labels, (std::vector<int>{0, 0, 1, 1}));
}

TEST(moons, seeded) {
    const ClusterData a = generate_moons(9, 0.1, 3);
    const ClusterData b = generate_moons(9, 0.1, 3);
    EXPECT_EQ(a.points, b.points);
    EXPECT_NE(a.points, generate_moons(9, 0.1, 4).points);
}

TEST(moons, max_cut_follows_arcs) {
    const ClusterData d = generate_moons(12, 0.05, 8);
    const BruteForceResult r = brute_force_solve(build_clustering_qubo(d));
    ASSERT_EQ(r.optimal_bitstrings.size(), 2u);
    EXPECT_GE(label_agreement(r.optimal_bitstrings[0], d.labels), 8.0 / 12.0);
}

TEST(blobs, spread_zero_distances) {
    const ClusterData d = generate_blobs(6, {{0, 0}, {3, 4}}, 0.0, 1);
    std::set<double> distinct;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i != j) distinct.insert(d.w_matrix(i, j));
        }
    }
    EXPECT_EQ(distinct, (std::set<double>{0.0, 5.0}));
}

TEST(blobs, separated_centers_are_recovered) {
    const ClusterData d = generate_blobs(10, {{0, 0}, {10, 10}}, 0.5, 6);
    const BruteForceResult r = brute_force_solve(build_clustering_qubo(d));
    for (std::uint64_t cut : r.optimal_bitstrings) EXPECT_EQ(label_agreement(cut, d.labels), 1.0);
    EXPECT_EQ(d.points, generate_blobs(10, {{0, 0}, {10, 10}}, 0.5, 6).points);
}

TEST(csv, format_round_trips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0}) {
        EXPECT_EQ(csv::parse_double(csv::format_double(v), 1, 1), v);
    }
    EXPECT_EQ(csv::format_double(0.1), "0.1");
}
