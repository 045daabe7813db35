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

#ifndef LRQAOA_DATASETS_HPP
#define LRQAOA_DATASETS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lrqaoa/error.hpp"
#include "lrqaoa/qubo.hpp"
#include "lrqaoa/rng.hpp"

namespace lrqaoa {

namespace csv {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline double parse_double(const std::string &cell, std::size_t row, std::size_t column) {
    const std::string t = trim(cell);
    char *end = nullptr;
    const double v = t.empty() ? 0.0 : std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        fail(ErrorCode::ParseError, "row " + std::to_string(row) + ", column " + std::to_string(column) +
                                        ": '" + t + "' is not a finite number");
    }
    return v;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::vector<std::string> read_lines(const std::string &path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace csv

// ---------------------------------------------------------------------------
// Portfolio

/// Header of asset names, one row of returns, then the n x n covariance.
inline PortfolioData parse_portfolio_csv(const std::vector<std::string> &lines, double q_risk = 1.0) {
    require(!lines.empty(), ErrorCode::ParseError, "portfolio file is empty");
    PortfolioData data;
    data.q_risk = q_risk;
    data.names = csv::split(lines[0]);
    const std::size_t n = data.names.size();
    require(n >= 1, ErrorCode::ParseError, "row 1: header names no assets");
    require(lines.size() == n + 2, ErrorCode::DimensionMismatch,
            "expected " + std::to_string(n + 2) + " rows (header, returns, " + std::to_string(n) +
                " covariance rows) but found " + std::to_string(lines.size()));
    auto row_values = [&](std::size_t r) {
        const auto cells = csv::split(lines[r]);
        if (cells.size() != n) {
            fail(ErrorCode::ParseError, "row " + std::to_string(r + 1) + ": expected " + std::to_string(n) +
                                            " columns, found " + std::to_string(cells.size()) +
                                            (cells.size() < n ? " (missing column " + std::to_string(cells.size() + 1) + ")"
                                                              : ""));
        }
        std::vector<double> values(n);
        for (std::size_t c = 0; c < n; ++c) values[c] = csv::parse_double(cells[c], r + 1, c + 1);
        return values;
    };
    data.mu = row_values(1);
    data.sigma = SquareMatrix(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto values = row_values(i + 2);
        for (std::size_t j = 0; j < n; ++j) data.sigma(i, j) = values[j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = data.sigma(i, j);
            const double b = data.sigma(j, i);
            if (std::abs(a - b) > 1e-9) {
                fail(ErrorCode::AsymmetricMatrix, "covariance entries (" + std::to_string(i + 1) + "," +
                                                      std::to_string(j + 1) + ") and (" + std::to_string(j + 1) + "," +
                                                      std::to_string(i + 1) + ") differ by more than 1e-9");
            }
            if (a != b) {
                data.sigma(i, j) = data.sigma(j, i) = 0.5 * (a + b);
            }
        }
    }
    return data;
}

inline PortfolioData ingest_portfolio_csv(const std::string &path, double q_risk = 1.0) {
    return parse_portfolio_csv(csv::read_lines(path), q_risk);
}

inline void write_portfolio_csv(std::ostream &out, const PortfolioData &data) {
    const std::size_t n = data.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << (i ? "," : "") << (data.names.empty() ? "asset" + std::to_string(i) : data.names[i]);
    }
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) out << (i ? "," : "") << csv::format_double(data.mu[i]);
    out << '\n';
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out << (j ? "," : "") << csv::format_double(data.sigma(i, j));
        out << '\n';
    }
}

/// Annualized one-factor-plus-sector market with n_assets stocks; a stand-in
/// for an index universe such as the 30 DAX constituents.
inline PortfolioData generate_portfolio_universe(std::size_t n_assets, std::uint64_t seed, double q_risk = 1.0) {
    require(n_assets >= 1, ErrorCode::InvalidArgument, "universe needs at least one asset");
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> vol_dist(0.10, 0.60);
    std::uniform_real_distribution<double> beta_dist(0.2, 0.9);
    std::uniform_int_distribution<int> sector_dist(0, 4);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> vol(n_assets), beta(n_assets);
    std::vector<int> sector(n_assets);
    PortfolioData data;
    data.q_risk = q_risk;
    for (std::size_t i = 0; i < n_assets; ++i) {
        vol[i] = vol_dist(rng);
        beta[i] = beta_dist(rng);
        sector[i] = sector_dist(rng);
        data.mu.push_back(0.04 + 0.25 * vol[i] * (1.0 + 0.5 * normal(rng)));
        data.names.push_back("A" + std::to_string(i + 1));
    }
    data.sigma = SquareMatrix(n_assets);
    for (std::size_t i = 0; i < n_assets; ++i) {
        for (std::size_t j = 0; j < n_assets; ++j) {
            const double corr = i == j ? 1.0 : beta[i] * beta[j] + (sector[i] == sector[j] ? 0.15 : 0.0);
            data.sigma(i, j) = vol[i] * vol[j] * corr;
        }
    }
    return data;
}

// ---------------------------------------------------------------------------
// Feature selection

/// Numeric table with named columns, stored column-major.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

struct FeatureIngest {
    FeatureData data;
    std::vector<std::string> feature_names;
    std::vector<std::string> warnings;
};

inline FeatureTable parse_feature_table(const std::vector<std::string> &lines) {
    require(!lines.empty(), ErrorCode::ParseError, "feature file is empty");
    FeatureTable table;
    table.names = csv::split(lines[0]);
    const std::size_t cols = table.names.size();
    table.columns.assign(cols, {});
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = csv::split(lines[r]);
        if (cells.size() != cols) {
            fail(ErrorCode::ParseError, "row " + std::to_string(r + 1) + ": expected " + std::to_string(cols) +
                                            " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < cols; ++c) table.columns[c].push_back(csv::parse_double(cells[c], r + 1, c + 1));
    }
    return table;
}

/// |Pearson correlation|; 0 when either column is constant.
inline std::optional<double> abs_correlation(const std::vector<double> &a, const std::vector<double> &b) {
    const double m = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= m;
    mb /= m;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
    return std::min(1.0, std::abs(sab) / std::sqrt(saa * sbb));
}

/// Correlation inputs for feature selection. The target is the named column,
/// or the last one when target_column is empty.
inline FeatureIngest features_from_table(const FeatureTable &table, const std::string &target_column = {},
                                         double phi = 0.9) {
    require(table.names.size() >= 2, ErrorCode::ParseError, "feature table needs at least one feature and a target");
    require(table.rows() >= 2, ErrorCode::ParseError, "feature table needs at least two rows");
    std::size_t target = table.names.size() - 1;
    if (!target_column.empty()) {
        auto it = std::find(table.names.begin(), table.names.end(), target_column);
        require(it != table.names.end(), ErrorCode::ParseError, "target column '" + target_column + "' not found");
        target = static_cast<std::size_t>(it - table.names.begin());
    }
    FeatureIngest out;
    std::vector<std::size_t> features;
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        if (c != target) {
            features.push_back(c);
            out.feature_names.push_back(table.names[c]);
        }
    }
    const std::size_t n = features.size();
    out.data.phi = phi;
    out.data.rho_ff = SquareMatrix(n);
    out.data.rho_fy.assign(n, 0.0);
    std::vector<bool> warned(table.names.size(), false);
    auto warn_constant = [&](std::size_t c) {
        if (!warned[c]) {
            out.warnings.push_back("column '" + table.names[c] + "' is constant; its correlations are set to 0");
            warned[c] = true;
        }
    };
    auto corr = [&](std::size_t a, std::size_t b) {
        auto r = abs_correlation(table.columns[a], table.columns[b]);
        if (!r) {
            if (!abs_correlation(table.columns[a], table.columns[a])) warn_constant(a);
            if (!abs_correlation(table.columns[b], table.columns[b])) warn_constant(b);
        }
        return r.value_or(0.0);
    };
    for (std::size_t i = 0; i < n; ++i) {
        out.data.rho_fy[i] = corr(features[i], target);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = corr(features[i], features[j]);
            out.data.rho_ff(i, j) = out.data.rho_ff(j, i) = r;
        }
    }
    return out;
}

inline FeatureIngest ingest_feature_csv(const std::string &path, const std::string &target_column = {},
                                        double phi = 0.9) {
    return features_from_table(parse_feature_table(csv::read_lines(path)), target_column, phi);
}

inline void write_feature_csv(std::ostream &out, const FeatureTable &table) {
    for (std::size_t c = 0; c < table.names.size(); ++c) out << (c ? "," : "") << table.names[c];
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << csv::format_double(table.columns[c][r]);
        }
        out << '\n';
    }
}

/// Correlated numeric features driven by a few latent factors plus a binary
/// target (imbalanced, about 30% positives), target is the last column.
inline FeatureTable generate_feature_table(std::size_t n_features, std::size_t n_rows, std::uint64_t seed) {
    require(n_features >= 1 && n_rows >= 2, ErrorCode::InvalidArgument, "need at least one feature and two rows");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    constexpr std::size_t kFactors = 4;
    std::vector<std::array<double, kFactors>> loadings(n_features);
    std::vector<double> noise_scale(n_features);
    for (auto &l : loadings) {
        for (double &v : l) v = unit(rng) < 0.5 ? 0.0 : normal(rng);
    }
    for (double &s : noise_scale) s = 0.5 + 1.5 * unit(rng);
    std::array<double, kFactors> target_weights{1.2, -0.8, 0.5, 0.0};

    FeatureTable table;
    for (std::size_t c = 0; c < n_features; ++c) table.names.push_back("f" + std::to_string(c + 1));
    table.names.push_back("target");
    table.columns.assign(n_features + 1, std::vector<double>(n_rows));
    for (std::size_t r = 0; r < n_rows; ++r) {
        std::array<double, kFactors> z{};
        for (double &v : z) v = normal(rng);
        double score = -0.85;
        for (std::size_t k = 0; k < kFactors; ++k) score += target_weights[k] * z[k] * 0.6;
        for (std::size_t c = 0; c < n_features; ++c) {
            double v = noise_scale[c] * normal(rng);
            for (std::size_t k = 0; k < kFactors; ++k) v += loadings[c][k] * z[k];
            table.columns[c][r] = v;
        }
        table.columns[n_features][r] = unit(rng) < 1.0 / (1.0 + std::exp(-score)) ? 1.0 : 0.0;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Clustering

/// Two interleaved half circles: the first ceil(n/2) points on (cos t, sin t),
/// the rest on (1 - cos t, 0.5 - sin t), t evenly spaced over [0, pi] on each
/// arc, plus isotropic Gaussian noise.
inline ClusterData generate_moons(std::size_t n_points, double noise, std::uint64_t seed) {
    require(n_points >= 2, ErrorCode::InvalidArgument, "moons need at least two points");
    require(noise >= 0.0, ErrorCode::InvalidArgument, "noise must be nonnegative");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t upper = (n_points + 1) / 2;
    const std::size_t lower = n_points - upper;
    auto t_at = [](std::size_t k, std::size_t count) {
        return count <= 1 ? 0.0 : std::numbers::pi * static_cast<double>(k) / static_cast<double>(count - 1);
    };
    std::vector<Point2> points;
    std::vector<int> labels;
    for (std::size_t k = 0; k < upper; ++k) {
        const double t = t_at(k, upper);
        points.push_back({std::cos(t), std::sin(t)});
        labels.push_back(0);
    }
    for (std::size_t k = 0; k < lower; ++k) {
        const double t = t_at(k, lower);
        points.push_back({1.0 - std::cos(t), 0.5 - std::sin(t)});
        labels.push_back(1);
    }
    if (noise > 0.0) {
        for (auto &pt : points) {
            pt.x += noise * normal(rng);
            pt.y += noise * normal(rng);
        }
    }
    return make_cluster_data(std::move(points), std::move(labels));
}

/// Isotropic Gaussian blobs; point k belongs to center k mod |centers|.
inline ClusterData generate_blobs(std::size_t n_points, const std::vector<Point2> &centers, double spread,
                                  std::uint64_t seed) {
    require(!centers.empty(), ErrorCode::InvalidArgument, "blobs need at least one center");
    require(spread >= 0.0, ErrorCode::InvalidArgument, "spread must be nonnegative");
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Point2> points;
    std::vector<int> labels;
    for (std::size_t k = 0; k < n_points; ++k) {
        const std::size_t c = k % centers.size();
        Point2 pt = centers[c];
        if (spread > 0.0) {
            pt.x += spread * normal(rng);
            pt.y += spread * normal(rng);
        }
        points.push_back(pt);
        labels.push_back(static_cast<int>(c));
    }
    return make_cluster_data(std::move(points), std::move(labels));
}

inline void write_points_csv(std::ostream &out, const ClusterData &data) {
    out << "x,y,label\n";
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        out << csv::format_double(data.points[i].x) << ',' << csv::format_double(data.points[i].y) << ','
            << (i < data.labels.size() ? data.labels[i] : -1) << '\n';
    }
}

}  // namespace lrqaoa

#endif  // LRQAOA_DATASETS_HPP
