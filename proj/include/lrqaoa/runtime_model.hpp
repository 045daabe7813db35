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

#ifndef LRQAOA_RUNTIME_MODEL_HPP
#define LRQAOA_RUNTIME_MODEL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lrqaoa/extrapolate.hpp"
#include "lrqaoa/landscape.hpp"
#include "lrqaoa/nelder_mead.hpp"
#include "lrqaoa/qubo.hpp"
#include "lrqaoa/rng.hpp"
#include "lrqaoa/simulator.hpp"
#include "lrqaoa/skew_gaussian.hpp"

namespace lrqaoa {

/// Gate layers per QAOA layer, as a function of n. The default n + 1 counts
/// n two-qubit layers for the all-to-all cost block (swap network) and one
/// mixer layer; a positive coefficient c replaces n + 1 by c * n.
struct DepthModel {
    double per_layer_depth_coefficient = 0.0;  // 0 selects n + 1

    double layers_per_qaoa_layer(std::size_t n) const {
        return per_layer_depth_coefficient > 0.0 ? per_layer_depth_coefficient * static_cast<double>(n)
                                                 : static_cast<double>(n) + 1.0;
    }
};

inline double circuit_depth(std::size_t n, int p, const DepthModel &model = {}) {
    require(n >= 1 && p >= 1, ErrorCode::InvalidArgument, "circuit depth needs n, p >= 1");
    return static_cast<double>(p) * model.layers_per_qaoa_layer(n);
}

/// {1, 2, 3} together with floor(2^(i/4)) for i = 9..max_index, ascending and
/// without duplicates.
inline std::vector<int> p_grid(int max_index) {
    std::vector<int> grid{1, 2, 3};
    for (int i = 9; i <= max_index; ++i) {
        grid.push_back(static_cast<int>(std::floor(std::exp2(i / 4.0))));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

enum class ShotStatistic { Median, Mean };

struct ShotEstimate {
    double p_opt = 0.0;
    double n_shots = 0.0;
    bool clamped = false;
};

inline constexpr double kMinSuccessProbability = 1e-15;
inline constexpr double kMaxSuccessProbability = 1.0 - 1e-9;

/// log(1/2) / log(1 - p_opt): shots after which the optimum has been seen
/// with probability 1/2. Real-valued, not rounded.
inline ShotEstimate median_shots(double p_opt) {
    ShotEstimate s;
    s.clamped = !(p_opt >= kMinSuccessProbability && p_opt <= kMaxSuccessProbability);
    s.p_opt = std::clamp(std::isfinite(p_opt) ? p_opt : kMinSuccessProbability, kMinSuccessProbability,
                         kMaxSuccessProbability);
    s.n_shots = std::log(0.5) / std::log1p(-s.p_opt);
    return s;
}

inline ShotEstimate mean_shots(double p_opt) {
    ShotEstimate s = median_shots(p_opt);
    s.n_shots = 1.0 / s.p_opt;
    return s;
}

inline ShotEstimate shots(double p_opt, ShotStatistic statistic) {
    return statistic == ShotStatistic::Median ? median_shots(p_opt) : mean_shots(p_opt);
}

struct ChainConfig {
    std::vector<int> sub_sizes{4, 6, 8, 10};
    int sub_instances_per_size = 10;
    GridSpec initial_grid{};
    SkewFitOptions fit{};
    DepthModel depth_model{};
    ShotStatistic shot_statistic = ShotStatistic::Median;
    int p_grid_max_index = 60;
    unsigned threads = 0;
    BruteForceOptions brute_force{};
    std::size_t simulator_limit = kDefaultSimulatorLimit;
};

/// Everything one evaluation of the sub-size chain at a fixed p produces.
struct ChainRecord {
    int p = 0;
    double d_est = 0.0;
    std::vector<SubSizeOptimum> optima;
    std::vector<GridSpec> grids;  // grid searched at each sub-size
    ExtrapolationResult extrapolation;
};

inline nlohmann::json to_json(const ChainRecord &r) {
    nlohmann::json j;
    j["p"] = r.p;
    j["d_est"] = r.d_est;
    for (const auto &o : r.optima) {
        j["optima"].push_back({o.size, o.log_gamma_opt, o.log_beta_opt, o.log_p_opt_max});
    }
    for (const auto &g : r.grids) {
        j["grids"].push_back({g.log_gamma_min, g.log_gamma_max, g.log_beta_min, g.log_beta_max, g.resolution});
    }
    const auto &e = r.extrapolation;
    auto fit = [](const LogLogFit &f) { return nlohmann::json::array({f.slope, f.intercept, f.residual}); };
    j["extrapolation"] = {{"delta_gamma", e.delta_gamma_extr}, {"delta_beta", e.delta_beta_extr},
                          {"p_opt", e.p_opt_extr},         {"gamma_fit", fit(e.gamma_fit)},
                          {"beta_fit", fit(e.beta_fit)},   {"p_opt_fit", fit(e.p_opt_fit)},
                          {"p", e.p},                      {"target_size", e.target_size},
                          {"clamped", e.p_opt_clamped}};
    return j;
}

inline ChainRecord chain_record_from_json(const nlohmann::json &j) {
    ChainRecord r;
    r.p = j.at("p").get<int>();
    r.d_est = j.at("d_est").get<double>();
    for (const auto &o : j.at("optima")) {
        r.optima.push_back({o.at(0).get<int>(), o.at(1).get<double>(), o.at(2).get<double>(), o.at(3).get<double>()});
    }
    for (const auto &g : j.at("grids")) {
        r.grids.push_back({g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>(), g.at(3).get<double>(),
                           g.at(4).get<int>()});
    }
    const auto &e = j.at("extrapolation");
    auto fit = [](const nlohmann::json &f) {
        return LogLogFit{f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()};
    };
    r.extrapolation.delta_gamma_extr = e.at("delta_gamma").get<double>();
    r.extrapolation.delta_beta_extr = e.at("delta_beta").get<double>();
    r.extrapolation.p_opt_extr = e.at("p_opt").get<double>();
    r.extrapolation.gamma_fit = fit(e.at("gamma_fit"));
    r.extrapolation.beta_fit = fit(e.at("beta_fit"));
    r.extrapolation.p_opt_fit = fit(e.at("p_opt_fit"));
    r.extrapolation.p = e.at("p").get<int>();
    r.extrapolation.target_size = e.at("target_size").get<int>();
    r.extrapolation.p_opt_clamped = e.at("clamped").get<bool>();
    return r;
}

/// Chain results keyed by "label|p|config hash"; concurrent readers, one
/// writer at a time. Optionally backed by a JSON file.
class ChainCache {
   public:
    ChainCache() = default;
    explicit ChainCache(std::string path) : path_(std::move(path)) { load(); }

    static std::string key(const std::string &label, int p, const std::string &config_hash) {
        return label + "|" + std::to_string(p) + "|" + config_hash;
    }

    std::optional<ChainRecord> find(const std::string &key) const {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void insert(const std::string &key, const ChainRecord &record) {
        std::unique_lock lock(mutex_);
        entries_[key] = record;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

    void save() const {
        if (path_.empty()) return;
        nlohmann::json j = nlohmann::json::object();
        {
            std::shared_lock lock(mutex_);
            for (const auto &[k, v] : entries_) j[k] = to_json(v);
        }
        std::ofstream out(path_);
        require(static_cast<bool>(out), ErrorCode::IoError, "cannot write chain cache " + path_);
        out << j.dump(1) << '\n';
    }

   private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception &e) {
            fail(ErrorCode::ParseError, "chain cache " + path_ + ": " + e.what());
        }
        for (const auto &[k, v] : j.items()) entries_[k] = chain_record_from_json(v);
    }

    std::string path_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, ChainRecord> entries_;
};

/// Local descent over grid indices: evaluates both neighbours of `start`,
/// moves toward the strictly smaller one (ties prefer the smaller index) and
/// continues while the value strictly decreases. Each index is evaluated at
/// most once. The result is a local minimum of `value`.
template <typename Value>
std::size_t descend_grid(std::size_t size, std::size_t start, Value &&value) {
    std::map<std::size_t, double> seen;
    auto at = [&](std::size_t k) {
        auto it = seen.find(k);
        if (it == seen.end()) it = seen.emplace(k, value(k)).first;
        return it->second;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::size_t idx = start;
    const double here = at(idx);
    const double down = idx > 0 ? at(idx - 1) : inf;
    const double up = idx + 1 < size ? at(idx + 1) : inf;
    int direction = 0;
    if (down < here && down <= up) {
        direction = -1;
    } else if (up < here) {
        direction = +1;
    }
    if (direction == 0) return idx;
    idx = direction < 0 ? idx - 1 : idx + 1;
    while (direction < 0 ? idx > 0 : idx + 1 < size) {
        const std::size_t next = direction < 0 ? idx - 1 : idx + 1;
        if (!(at(next) < at(idx))) break;
        idx = next;
    }
    return idx;
}

struct DepthTracePoint {
    int p = 0;
    double d_est = 0.0;
};

struct DepthOptimizationResult {
    int p_star = 0;
    double d_circuit = 0.0;
    double d_est = 0.0;        // estimated total depth at p_star
    double total_depth = 0.0;  // realized, from the full-size simulation
    double p_opt_realized = 0.0;
    std::size_t optima_count = 0;
    bool outlier = false;
    std::vector<DepthTracePoint> trace;
    ChainRecord chain;
};

/// Sub-instances of one full-size instance, drawn once and reused for every
/// depth p, plus the full-size cost table for the final simulation.
class DepthOptimizer {
   public:
    DepthOptimizer(QuboInstance instance, ChainConfig config, std::uint64_t seed, std::string config_hash = "nohash",
                   ChainCache *cache = nullptr)
        : instance_(std::move(instance)),
          config_(std::move(config)),
          config_hash_(std::move(config_hash)),
          cache_(cache) {
        require(!config_.sub_sizes.empty(), ErrorCode::ConfigError, "at least one sub-size is required");
        require(config_.sub_instances_per_size >= 1, ErrorCode::ConfigError, "need at least one sub-instance per size");
        for (int size : config_.sub_sizes) {
            require(size >= 2 && static_cast<std::size_t>(size) < instance_.n(), ErrorCode::ConfigError,
                    "sub-size " + std::to_string(size) + " must lie in [2, N)");
            std::vector<PreparedInstance> group;
            for (int k = 0; k < config_.sub_instances_per_size; ++k) {
                const std::uint64_t s =
                    derive_seed(seed, {streams::kSubInstance, static_cast<std::uint64_t>(size), static_cast<std::uint64_t>(k)});
                group.push_back(PreparedInstance::from(sample_sub_instance(instance_, static_cast<std::size_t>(size), s),
                                                       config_.brute_force));
            }
            sub_instances_.push_back(std::move(group));
        }
    }

    const QuboInstance &instance() const { return instance_; }
    const ChainConfig &config() const { return config_; }
    const std::vector<std::vector<PreparedInstance>> &sub_instances() const { return sub_instances_; }

    /// Grid search, fit and reduction through every sub-size at depth p, then
    /// extrapolation to N and D_est = d(N, p) * shots(P_opt,extr).
    ChainRecord estimate_total_depth(int p) {
        if (auto it = local_.find(p); it != local_.end()) return it->second;
        const std::string key = ChainCache::key(instance_.label(), p, config_hash_);
        if (cache_) {
            if (auto hit = cache_->find(key)) {
                local_[p] = *hit;
                return *hit;
            }
        }
        ChainRecord record;
        record.p = p;
        GridSpec grid = config_.initial_grid;
        for (std::size_t s = 0; s < config_.sub_sizes.size(); ++s) {
            const auto landscape = run_grid_search(std::span<const PreparedInstance>(sub_instances_[s]), grid, p, false,
                                                   config_.threads);
            const LandscapeOptimum opt = optimize_landscape(landscape, config_.fit);
            record.grids.push_back(grid);
            record.optima.push_back(SubSizeOptimum{config_.sub_sizes[s], opt.log_gamma_opt, opt.log_beta_opt,
                                                   std::log10(std::max(opt.p_opt_max, kMinSuccessProbability))});
            grid = reduce_grid(opt, grid.resolution);
        }
        record.extrapolation = extrapolate_params(record.optima, static_cast<int>(instance_.n()), p);
        record.d_est = circuit_depth(instance_.n(), p, config_.depth_model) *
                       shots(record.extrapolation.p_opt_extr, config_.shot_statistic).n_shots;
        local_[p] = record;
        if (cache_) cache_->insert(key, record);
        return record;
    }

    const PreparedInstance &full() {
        if (!full_) full_ = PreparedInstance::from(instance_, config_.brute_force);
        return *full_;
    }

    SuccessProbability realized_success(double delta_gamma, double delta_beta, int p) {
        const PreparedInstance &prepared = full();
        return success_probability(
            simulate_costs(prepared.costs, prepared.n, build_schedule(delta_gamma, delta_beta, p), config_.simulator_limit),
            prepared.optima);
    }

    double realized_total_depth(double delta_gamma, double delta_beta, int p) {
        return circuit_depth(instance_.n(), p, config_.depth_model) *
               shots(realized_success(delta_gamma, delta_beta, p).p_opt, config_.shot_statistic).n_shots;
    }

    /// Local descent of D_est over the p-grid from p_init (snapped to the
    /// nearest grid point), then one full-size simulation at the chosen
    /// parameters.
    DepthOptimizationResult optimize_depth(int p_init) {
        const std::vector<int> grid = p_grid(config_.p_grid_max_index);
        std::size_t idx = snap_to_grid(grid, p_init);
        DepthOptimizationResult result;
        auto d_at = [&](std::size_t k) {
            const ChainRecord r = estimate_total_depth(grid[k]);
            result.trace.push_back({grid[k], r.d_est});
            return r.d_est;
        };
        idx = descend_grid(grid.size(), idx, d_at);

        result.p_star = grid[idx];
        result.chain = estimate_total_depth(result.p_star);
        result.d_est = result.chain.d_est;
        result.d_circuit = circuit_depth(instance_.n(), result.p_star, config_.depth_model);
        const auto realized = realized_success(result.chain.extrapolation.delta_gamma_extr,
                                               result.chain.extrapolation.delta_beta_extr, result.p_star);
        result.p_opt_realized = realized.p_opt;
        result.optima_count = realized.optima_count;
        if (realized.p_opt <= kMinSuccessProbability) {
            result.outlier = true;
            result.total_depth = std::numeric_limits<double>::infinity();
        } else {
            result.total_depth = result.d_circuit * shots(realized.p_opt, config_.shot_statistic).n_shots;
        }
        return result;
    }

    static std::size_t snap_to_grid(const std::vector<int> &grid, int p) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < grid.size(); ++k) {
            if (std::abs(grid[k] - p) < std::abs(grid[best] - p)) best = k;
        }
        return best;
    }

   private:
    QuboInstance instance_;
    ChainConfig config_;
    std::string config_hash_;
    ChainCache *cache_ = nullptr;
    std::vector<std::vector<PreparedInstance>> sub_instances_;
    std::map<int, ChainRecord> local_;
    std::optional<PreparedInstance> full_;
};

struct DirectMinimum {
    int p = 0;
    double log_gamma = 0.0;
    double log_beta = 0.0;
    double total_depth = 0.0;
    double p_opt = 0.0;
};

/// Minimizes the realized total depth directly: simplex descent in
/// (log dgamma, log dbeta) at each p, seeded at the extrapolated parameters,
/// with a local descent over the p-grid starting at p_star.
inline DirectMinimum minimize_realized_depth(DepthOptimizer &optimizer, const DepthOptimizationResult &start,
                                             int iterations_per_p = 150) {
    const std::vector<int> grid = optimizer.config().p_grid_max_index > 0 ? p_grid(optimizer.config().p_grid_max_index)
                                                                          : std::vector<int>{start.p_star};
    const double lg0 = std::log10(start.chain.extrapolation.delta_gamma_extr);
    const double lb0 = std::log10(start.chain.extrapolation.delta_beta_extr);
    std::map<std::size_t, DirectMinimum> seen;
    auto solve = [&](std::size_t k) {
        if (auto it = seen.find(k); it != seen.end()) return it->second;
        const int p = grid[k];
        auto objective = [&](const std::vector<double> &x) {
            return std::log(optimizer.realized_total_depth(std::pow(10.0, x[0]), std::pow(10.0, x[1]), p));
        };
        NelderMeadOptions nm;
        nm.max_iterations = iterations_per_p;
        nm.x_tolerance = 1e-4;
        nm.f_tolerance = 1e-10;
        const NelderMeadResult r = nelder_mead(objective, {lg0, lb0}, {0.1, 0.1}, nm);
        DirectMinimum m{p, r.x[0], r.x[1], std::exp(r.value),
                        optimizer.realized_success(std::pow(10.0, r.x[0]), std::pow(10.0, r.x[1]), p).p_opt};
        seen[k] = m;
        return m;
    };
    const std::size_t idx = descend_grid(grid.size(), DepthOptimizer::snap_to_grid(grid, start.p_star),
                                         [&](std::size_t k) { return solve(k).total_depth; });
    return solve(idx);
}

inline constexpr const char *kDescentHeader = "instance,p,D_est,chosen_flag";

inline void write_descent_rows(std::ostream &out, const std::string &instance, const DepthOptimizationResult &r) {
    out.precision(17);
    for (const auto &t : r.trace) {
        out << instance << ',' << t.p << ',' << t.d_est << ',' << (t.p == r.p_star ? 1 : 0) << '\n';
    }
}

}  // namespace lrqaoa

#endif  // LRQAOA_RUNTIME_MODEL_HPP
