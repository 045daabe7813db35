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

#ifndef LRQAOA_QUBO_HPP
#define LRQAOA_QUBO_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrqaoa/error.hpp"
#include "lrqaoa/rng.hpp"

namespace lrqaoa {

/// Row-major dense square matrix.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t size, double fill = 0.0) : n(size), data(size * size, fill) {}

    static SquareMatrix identity(std::size_t size) {
        SquareMatrix m(size);
        for (std::size_t i = 0; i < size; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    double &operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }

    bool is_symmetric(double tolerance = 0.0) const {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (std::abs((*this)(i, j) - (*this)(j, i)) > tolerance) {
                    return false;
                }
            }
        }
        return true;
    }

    SquareMatrix principal(std::span<const std::size_t> indices) const {
        SquareMatrix sub(indices.size());
        for (std::size_t a = 0; a < indices.size(); ++a) {
            for (std::size_t b = 0; b < indices.size(); ++b) {
                sub(a, b) = (*this)(indices[a], indices[b]);
            }
        }
        return sub;
    }

    bool operator==(const SquareMatrix &) const = default;
};

enum class ProblemFamily { Portfolio, FeatureSelection, Clustering, Generic };

inline const char *to_string(ProblemFamily family) {
    switch (family) {
        case ProblemFamily::Portfolio:
            return "portfolio";
        case ProblemFamily::FeatureSelection:
            return "feature";
        case ProblemFamily::Clustering:
            return "clustering";
        case ProblemFamily::Generic:
            return "generic";
    }
    return "generic";
}

inline ProblemFamily family_from_string(const std::string &name) {
    if (name == "portfolio") return ProblemFamily::Portfolio;
    if (name == "feature") return ProblemFamily::FeatureSelection;
    if (name == "clustering") return ProblemFamily::Clustering;
    if (name == "generic") return ProblemFamily::Generic;
    fail(ErrorCode::ConfigError, "unknown problem family '" + name + "'");
}

struct CardinalityConstraint {
    int budget = 0;
    double penalty = 0.0;
};

struct PortfolioData {
    std::vector<double> mu;
    SquareMatrix sigma;
    double q_risk = 1.0;
    std::vector<std::string> names;

    std::size_t size() const { return mu.size(); }

    void validate() const {
        require(sigma.n == mu.size(), ErrorCode::DimensionMismatch,
                "covariance is " + std::to_string(sigma.n) + "x" + std::to_string(sigma.n) + " but " +
                    std::to_string(mu.size()) + " returns were given");
        require(sigma.n >= 1, ErrorCode::InvalidArgument, "portfolio needs at least one asset");
        require(sigma.is_symmetric(1e-9), ErrorCode::AsymmetricMatrix, "covariance matrix is not symmetric");
        require(q_risk >= 0.0 && q_risk <= 1.0, ErrorCode::InvalidArgument, "risk preference q must lie in [0,1]");
        require(names.empty() || names.size() == mu.size(), ErrorCode::DimensionMismatch,
                "asset name count does not match returns");
    }

    PortfolioData select(std::span<const std::size_t> indices) const {
        PortfolioData out;
        out.q_risk = q_risk;
        out.sigma = sigma.principal(indices);
        for (std::size_t i : indices) {
            out.mu.push_back(mu[i]);
            if (!names.empty()) {
                out.names.push_back(names[i]);
            }
        }
        return out;
    }
};

struct FeatureData {
    SquareMatrix rho_ff;
    std::vector<double> rho_fy;
    double phi = 0.9;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2 &) const = default;
};

struct ClusterData {
    std::vector<Point2> points;
    SquareMatrix w_matrix;
    std::vector<int> labels;  // generating cluster of each point, when known
};

inline ClusterData make_cluster_data(std::vector<Point2> points, std::vector<int> labels = {}) {
    ClusterData data;
    data.w_matrix = SquareMatrix(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double d = std::hypot(points[i].x - points[j].x, points[i].y - points[j].y);
            data.w_matrix(i, j) = d;
            data.w_matrix(j, i) = d;
        }
    }
    data.points = std::move(points);
    data.labels = std::move(labels);
    return data;
}

/// A QUBO F(z) = sum_ij Q_ij z_i z_j + constant over binary z (minimized).
/// Bitstrings are packed little-endian into integers: bit i is z_i.
class QuboInstance {
   public:
    QuboInstance(SquareMatrix matrix, ProblemFamily family = ProblemFamily::Generic, std::string label = {},
                 double constant = 0.0, std::optional<CardinalityConstraint> constraint = std::nullopt,
                 std::shared_ptr<const PortfolioData> portfolio = nullptr)
        : q_(std::move(matrix)),
          constant_(constant),
          family_(family),
          label_(std::move(label)),
          constraint_(constraint),
          portfolio_(std::move(portfolio)) {
        require(q_.n >= 1, ErrorCode::InvalidArgument, "QUBO needs at least one variable");
        require(q_.data.size() == q_.n * q_.n, ErrorCode::DimensionMismatch, "QUBO matrix storage is not n*n");
        for (std::size_t i = 0; i < q_.n; ++i) {
            for (std::size_t j = i + 1; j < q_.n; ++j) {
                double s = 0.5 * (q_(i, j) + q_(j, i));
                q_(i, j) = s;
                q_(j, i) = s;
            }
        }
        if (constraint_) {
            require(constraint_->penalty >= 0.0, ErrorCode::InvalidArgument, "penalty must be nonnegative");
            require(constraint_->budget >= 0 && static_cast<std::size_t>(constraint_->budget) <= q_.n,
                    ErrorCode::InvalidArgument, "budget must lie in [0, n]");
        }
    }

    std::size_t n() const { return q_.n; }
    const SquareMatrix &matrix() const { return q_; }
    double q(std::size_t i, std::size_t j) const { return q_(i, j); }
    double constant() const { return constant_; }
    ProblemFamily family() const { return family_; }
    const std::string &label() const { return label_; }
    const std::optional<CardinalityConstraint> &constraint() const { return constraint_; }
    const PortfolioData *portfolio() const { return portfolio_.get(); }

    QuboInstance relabeled(std::string label) const {
        QuboInstance copy = *this;
        copy.label_ = std::move(label);
        return copy;
    }

   private:
    SquareMatrix q_;
    double constant_;
    ProblemFamily family_;
    std::string label_;
    std::optional<CardinalityConstraint> constraint_;
    std::shared_ptr<const PortfolioData> portfolio_;
};

/// 1 + sum_ij |q sigma_ij| + sum_i |(1-q) mu_i|: large enough that every
/// minimizer of the penalized cost meets the budget exactly.
inline double default_penalty(const PortfolioData &data) {
    double total = 1.0;
    for (double s : data.sigma.data) {
        total += std::abs(data.q_risk * s);
    }
    for (double m : data.mu) {
        total += std::abs((1.0 - data.q_risk) * m);
    }
    return total;
}

/// max_i |U_ii| + 2 sum_{j!=i} |U_ij| for the unconstrained portfolio matrix U:
/// the most any single flip can change the objective. Any A above it makes
/// every minimizer feasible, since reaching the budget from weight B + k takes
/// |k| flips costing at most |k| M while the penalty drops by A k^2.
inline double flip_bound_penalty(const PortfolioData &data) {
    data.validate();
    double bound = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double row = std::abs(data.q_risk * data.sigma(i, i) - (1.0 - data.q_risk) * data.mu[i]);
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (j != i) row += 2.0 * std::abs(data.q_risk * data.sigma(i, j));
        }
        bound = std::max(bound, row);
    }
    return bound;
}

/// q z^T sigma z - (1-q) mu^T z + A (sum z - B)^2, linear parts on the
/// diagonal and A B^2 kept as the additive constant.
inline QuboInstance build_portfolio_qubo(const PortfolioData &data, int budget, double penalty,
                                         std::string label = {}) {
    data.validate();
    require(penalty >= 0.0, ErrorCode::InvalidArgument, "penalty must be nonnegative");
    require(budget >= 0 && static_cast<std::size_t>(budget) <= data.size(), ErrorCode::InvalidArgument,
            "budget must lie in [0, n]");
    const std::size_t n = data.size();
    SquareMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            q(i, j) = data.q_risk * 0.5 * (data.sigma(i, j) + data.sigma(j, i)) + penalty;
        }
        q(i, i) += -(1.0 - data.q_risk) * data.mu[i] - 2.0 * penalty * budget;
    }
    double constant = penalty * static_cast<double>(budget) * static_cast<double>(budget);
    return QuboInstance(std::move(q), ProblemFamily::Portfolio, std::move(label), constant,
                        CardinalityConstraint{budget, penalty}, std::make_shared<const PortfolioData>(data));
}

/// -(phi sum_i z_i |rho_iY| - (1-phi) sum_{i!=j} z_i z_j |rho_ij|).
inline QuboInstance build_feature_qubo(const FeatureData &data, std::string label = {}) {
    const std::size_t n = data.rho_fy.size();
    require(n >= 1, ErrorCode::InvalidArgument, "feature selection needs at least one feature");
    require(data.rho_ff.n == n, ErrorCode::DimensionMismatch, "feature correlation matrix does not match target vector");
    require(data.phi >= 0.0 && data.phi <= 1.0, ErrorCode::InvalidArgument, "phi must lie in [0,1]");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    require(std::all_of(data.rho_fy.begin(), data.rho_fy.end(), in_unit), ErrorCode::InvalidArgument,
            "feature-target correlations must lie in [0,1]");
    require(std::all_of(data.rho_ff.data.begin(), data.rho_ff.data.end(), in_unit), ErrorCode::InvalidArgument,
            "feature-feature correlations must lie in [0,1]");
    SquareMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            q(i, j) = i == j ? -data.phi * data.rho_fy[i] : (1.0 - data.phi) * data.rho_ff(i, j);
        }
    }
    return QuboInstance(std::move(q), ProblemFamily::FeatureSelection, std::move(label));
}

/// Negated cut weight -sum_ij w_ij (z_i + z_j - 2 z_i z_j), summed over
/// ordered pairs, so that minimizing it is MaxCut.
inline QuboInstance build_clustering_qubo(const ClusterData &data, std::string label = {}) {
    const SquareMatrix &w = data.w_matrix;
    const std::size_t n = w.n;
    require(n >= 1, ErrorCode::InvalidArgument, "clustering needs at least one point");
    require(data.points.empty() || data.points.size() == n, ErrorCode::DimensionMismatch,
            "point count does not match distance matrix");
    require(w.is_symmetric(0.0), ErrorCode::AsymmetricMatrix, "distance matrix is not symmetric");
    SquareMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        require(w(i, i) == 0.0, ErrorCode::InvalidArgument, "distance matrix diagonal must be zero");
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            require(w(i, j) >= 0.0, ErrorCode::InvalidArgument, "distances must be nonnegative");
            degree += w(i, j);
            if (i != j) {
                q(i, j) = 2.0 * w(i, j);
            }
        }
        q(i, i) = -2.0 * degree;
    }
    return QuboInstance(std::move(q), ProblemFamily::Clustering, std::move(label));
}

inline double evaluate(const QuboInstance &instance, std::span<const std::uint8_t> bits) {
    require(bits.size() == instance.n(), ErrorCode::DimensionMismatch,
            "bit vector has length " + std::to_string(bits.size()) + ", instance has " + std::to_string(instance.n()));
    const SquareMatrix &q = instance.matrix();
    double total = 0.0;
    for (std::size_t i = 0; i < q.n; ++i) {
        if (!bits[i]) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < q.n; ++j) {
            if (bits[j]) row += q(i, j);
        }
        total += row;
    }
    return total + instance.constant();
}

inline std::vector<std::uint8_t> bits_from_index(std::uint64_t index, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
    }
    return bits;
}

inline std::uint64_t index_from_bits(std::span<const std::uint8_t> bits) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) index |= std::uint64_t{1} << i;
    }
    return index;
}

inline double evaluate_index(const QuboInstance &instance, std::uint64_t index) {
    const SquareMatrix &q = instance.matrix();
    double total = 0.0;
    for (std::size_t i = 0; i < q.n; ++i) {
        if (!((index >> i) & 1U)) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < q.n; ++j) {
            if ((index >> j) & 1U) row += q(i, j);
        }
        total += row;
    }
    return total + instance.constant();
}

/// F(z) for every z in [0, 2^n). Entry z|2^k is built from entry z (< 2^k)
/// by adding bit k's contribution, so each value is a sum of at most n
/// increments.
inline std::vector<double> cost_table(const QuboInstance &instance) {
    const std::size_t n = instance.n();
    require(n < 40, ErrorCode::SizeLimit, "cost table would not fit in memory");
    const SquareMatrix &q = instance.matrix();
    std::vector<double> table(std::size_t{1} << n);
    table[0] = instance.constant();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t half = std::size_t{1} << k;
        const double diag = q(k, k);
        for (std::size_t z = 0; z < half; ++z) {
            double coupling = 0.0;
            for (std::size_t j = 0; j < k; ++j) {
                if ((z >> j) & 1U) coupling += q(k, j);
            }
            table[z | half] = table[z] + diag + 2.0 * coupling;
        }
    }
    return table;
}

/// Sorted k-subset of [0, n) drawn uniformly without replacement.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    require(k <= n, ErrorCode::InvalidArgument,
            "cannot sample " + std::to_string(k) + " of " + std::to_string(n) + " variables");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng = make_rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// Sub-problem on the given variables. Portfolio instances are rebuilt from
/// their asset data with budget floor(k/2) and the parent's penalty; other
/// families keep the principal sub-matrix of Q.
inline QuboInstance restrict_instance(const QuboInstance &instance, std::span<const std::size_t> indices,
                                      std::string label) {
    require(!indices.empty() && indices.size() <= instance.n(), ErrorCode::InvalidArgument,
            "sub-instance size must lie in [1, n]");
    if (instance.family() == ProblemFamily::Portfolio && instance.portfolio() && instance.constraint()) {
        PortfolioData sub = instance.portfolio()->select(indices);
        int budget = static_cast<int>(indices.size() / 2);
        return build_portfolio_qubo(sub, budget, instance.constraint()->penalty, std::move(label));
    }
    return QuboInstance(instance.matrix().principal(indices), instance.family(), std::move(label));
}

inline QuboInstance sample_sub_instance(const QuboInstance &instance, std::size_t sub_size, std::uint64_t seed) {
    require(sub_size <= instance.n(), ErrorCode::InvalidArgument,
            "sub-instance size " + std::to_string(sub_size) + " exceeds instance size " + std::to_string(instance.n()));
    auto indices = sample_indices(instance.n(), sub_size, seed);
    return restrict_instance(instance, indices, instance.label() + "/sub" + std::to_string(sub_size));
}

struct BruteForceResult {
    std::size_t n = 0;
    double optimal_value = 0.0;
    std::vector<std::uint64_t> optimal_bitstrings;  // packed little-endian, ascending
    std::uint64_t evaluations = 0;
};

struct BruteForceOptions {
    std::size_t max_n = 24;
    double tolerance = 1e-9;
};

/// Exhaustive minimization in Gray-code order with O(n) incremental updates
/// per step. Values that came within a drift-safe margin of the running best
/// are re-evaluated exactly before the final tolerance test.
inline BruteForceResult brute_force_solve(const QuboInstance &instance, const BruteForceOptions &options = {}) {
    const std::size_t n = instance.n();
    require(n <= options.max_n, ErrorCode::SizeLimit,
            "brute force limited to n <= " + std::to_string(options.max_n) + ", got " + std::to_string(n));
    const SquareMatrix &q = instance.matrix();

    double scale = 1.0;
    for (double v : q.data) scale += std::abs(v);
    const std::uint64_t total = std::uint64_t{1} << n;
    const double margin = options.tolerance + 4.0 * static_cast<double>(total) * 1.2e-16 * scale;

    std::vector<double> field(n, 0.0);  // field[j] = sum_l Q_jl z_l
    std::uint64_t current = 0;
    double value = instance.constant();
    double best = value;
    std::vector<std::uint64_t> candidates{0};
    std::size_t prune_at = 1024;

    for (std::uint64_t step = 1; step < total; ++step) {
        const auto k = static_cast<std::size_t>(std::countr_zero(step));
        const bool on = ((current >> k) & 1U) == 0;
        const double sign = on ? 1.0 : -1.0;
        const double diag = q(k, k);
        value += on ? diag + 2.0 * field[k] : -(2.0 * field[k] - diag);
        current ^= std::uint64_t{1} << k;
        const double *column = &q.data[k * n];
        for (std::size_t j = 0; j < n; ++j) {
            field[j] += sign * column[j];
        }
        if (value <= best + margin) {
            best = std::min(best, value);
            candidates.push_back(current);
            if (candidates.size() >= prune_at) {
                std::erase_if(candidates, [&](std::uint64_t c) { return evaluate_index(instance, c) > best + margin; });
                prune_at = std::max<std::size_t>(1024, 2 * candidates.size());
            }
        }
    }

    BruteForceResult result;
    result.n = n;
    result.evaluations = total;
    std::vector<std::pair<double, std::uint64_t>> exact;
    exact.reserve(candidates.size());
    for (std::uint64_t c : candidates) {
        exact.emplace_back(evaluate_index(instance, c), c);
    }
    double exact_best = exact.front().first;
    for (const auto &[v, c] : exact) exact_best = std::min(exact_best, v);
    for (const auto &[v, c] : exact) {
        if (v <= exact_best + options.tolerance) {
            result.optimal_bitstrings.push_back(c);
        }
    }
    std::sort(result.optimal_bitstrings.begin(), result.optimal_bitstrings.end());
    result.optimal_bitstrings.erase(std::unique(result.optimal_bitstrings.begin(), result.optimal_bitstrings.end()),
                                    result.optimal_bitstrings.end());
    result.optimal_value = exact_best;
    return result;
}

}  // namespace lrqaoa

#endif  // LRQAOA_QUBO_HPP
