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

#ifndef LRQAOA_EXPERIMENT_HPP
#define LRQAOA_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lrqaoa/baseline.hpp"
#include "lrqaoa/datasets.hpp"
#include "lrqaoa/error.hpp"
#include "lrqaoa/extrapolate.hpp"
#include "lrqaoa/qubo.hpp"
#include "lrqaoa/rng.hpp"
#include "lrqaoa/runtime_model.hpp"
#include "lrqaoa/scaling.hpp"

namespace lrqaoa {

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
    std::string family = "portfolio";
    std::string cluster_dataset = "moons";  // moons | blobs
    int n_min = 12;
    int n_max = 16;
    int n_step = 2;
    int instances_per_size = 10;
    std::vector<int> sub_sizes{4, 6, 8};
    int sub_instances_per_size = 10;
    int grid_resolution = 11;
    double log_gamma_min = -1.0;
    double log_gamma_max = 1.0;
    double log_beta_min = -1.5;
    double log_beta_max = 0.5;
    int p0 = 6;
    int p_grid_max_index = 60;
    double depth_coefficient = 0.0;  // 0 selects N + 1 gate layers per QAOA layer
    std::string shot_statistic = "median";
    std::uint64_t seed = 20240901;
    std::string penalty = "flip_bound";  // flip_bound | sum_bound | numeric value
    double q_risk = 1.0;
    double phi = 0.9;
    int universe_size = 30;
    std::string portfolio_csv;
    std::string feature_csv;
    std::string feature_target;
    int feature_count = 48;
    double moons_noise = 0.1;
    double blobs_spread = 0.6;
    int classical_n_max = 20;  // 0: same as n_max
    int classical_repetitions = 5;
    int annealing_budget = 2000;
    double classical_wall_limit = 60.0;
    std::vector<int> direct_min_sizes;
    int direct_min_instances = 3;
    int brute_force_max_n = 24;
    int simulator_limit = 26;
    unsigned threads = 0;
    bool deterministic = false;
    bool use_chain_cache = true;
    std::string output_dir = "results";

    std::vector<int> sizes() const {
        std::vector<int> out;
        for (int n = n_min; n <= n_max; n += n_step) out.push_back(n);
        return out;
    }

    std::vector<int> classical_sizes() const {
        std::vector<int> out;
        const int top = classical_n_max > 0 ? classical_n_max : n_max;
        for (int n = n_min; n <= top; n += n_step) out.push_back(n);
        return out;
    }

    void validate() const {
        auto check = [](bool ok, const std::string &msg) { require(ok, ErrorCode::ConfigError, msg); };
        check(family == "portfolio" || family == "feature" || family == "clustering",
              "family must be portfolio, feature or clustering");
        check(cluster_dataset == "moons" || cluster_dataset == "blobs", "cluster_dataset must be moons or blobs");
        check(n_min >= 2 && n_min <= n_max && n_step >= 1, "size range must satisfy 2 <= n_min <= n_max, n_step >= 1");
        check(instances_per_size >= 1, "instances_per_size must be positive");
        check(!sub_sizes.empty(), "sub_sizes must not be empty");
        for (std::size_t i = 0; i < sub_sizes.size(); ++i) {
            check(sub_sizes[i] >= 2, "sub-sizes must be at least 2");
            check(i == 0 || sub_sizes[i] > sub_sizes[i - 1], "sub-sizes must be strictly increasing");
        }
        check(sub_sizes.back() < n_min, "largest sub-size must be below n_min");
        check(sub_instances_per_size >= 1, "sub_instances_per_size must be positive");
        check(grid_resolution >= 3, "grid_resolution must be at least 3");
        check(log_gamma_min < log_gamma_max && log_beta_min < log_beta_max, "grid bounds must be ordered");
        check(p0 >= 1, "p0 must be positive");
        check(p_grid_max_index >= 9, "p_grid_max_index must be at least 9");
        check(depth_coefficient >= 0.0, "depth_coefficient must be nonnegative");
        check(shot_statistic == "median" || shot_statistic == "mean", "shot_statistic must be median or mean");
        check(penalty == "flip_bound" || penalty == "sum_bound" || parse_penalty_value().has_value(),
              "penalty must be flip_bound, sum_bound or a nonnegative number");
        check(q_risk >= 0.0 && q_risk <= 1.0, "q_risk must lie in [0,1]");
        check(phi >= 0.0 && phi <= 1.0, "phi must lie in [0,1]");
        check(universe_size >= n_max || !portfolio_csv.empty() || family != "portfolio",
              "universe_size must be at least n_max");
        check(feature_count >= n_max || !feature_csv.empty() || family != "feature",
              "feature_count must be at least n_max");
        check(classical_repetitions >= 1 && annealing_budget >= 1, "classical settings must be positive");
        check(n_max <= brute_force_max_n && n_max <= simulator_limit, "n_max exceeds the brute-force or simulator limit");
        check(!output_dir.empty(), "output_dir must be set");
    }

    std::optional<double> parse_penalty_value() const {
        char *end = nullptr;
        const double v = std::strtod(penalty.c_str(), &end);
        if (penalty.empty() || end != penalty.c_str() + penalty.size() || !(v >= 0.0)) return std::nullopt;
        return v;
    }

    ChainConfig chain_config() const {
        ChainConfig c;
        c.sub_sizes = sub_sizes;
        c.sub_instances_per_size = sub_instances_per_size;
        c.initial_grid = GridSpec{log_gamma_min, log_gamma_max, log_beta_min, log_beta_max, grid_resolution};
        c.depth_model.per_layer_depth_coefficient = depth_coefficient;
        c.shot_statistic = shot_statistic == "mean" ? ShotStatistic::Mean : ShotStatistic::Median;
        c.p_grid_max_index = p_grid_max_index;
        c.threads = threads;
        c.brute_force.max_n = static_cast<std::size_t>(brute_force_max_n);
        c.simulator_limit = static_cast<std::size_t>(simulator_limit);
        return c;
    }
};

#define LRQAOA_CONFIG_FIELDS(X)                                                                                       \
    X(family) X(cluster_dataset) X(n_min) X(n_max) X(n_step) X(instances_per_size) X(sub_sizes)                        \
    X(sub_instances_per_size) X(grid_resolution) X(log_gamma_min) X(log_gamma_max) X(log_beta_min) X(log_beta_max)    \
    X(p0) X(p_grid_max_index) X(depth_coefficient) X(shot_statistic) X(seed) X(penalty) X(q_risk) X(phi)              \
    X(universe_size) X(portfolio_csv) X(feature_csv) X(feature_target) X(feature_count) X(moons_noise)                 \
    X(blobs_spread) X(classical_n_max) X(classical_repetitions) X(annealing_budget) X(classical_wall_limit)           \
    X(direct_min_sizes) X(direct_min_instances) X(brute_force_max_n) X(simulator_limit) X(threads) X(deterministic)   \
    X(use_chain_cache) X(output_dir)

inline nlohmann::json to_json(const ExperimentConfig &c) {
    nlohmann::json j;
#define LRQAOA_TO_JSON(field) j[#field] = c.field;
    LRQAOA_CONFIG_FIELDS(LRQAOA_TO_JSON)
#undef LRQAOA_TO_JSON
    return j;
}

/// Overlays the keys present in j onto config; unknown keys are an error.
inline void apply_json(ExperimentConfig &c, const nlohmann::json &j) {
    require(j.is_object(), ErrorCode::ConfigError, "configuration must be a JSON object");
    const nlohmann::json known = to_json(c);
    for (const auto &[key, value] : j.items()) {
        require(known.contains(key), ErrorCode::ConfigError, "unknown configuration key '" + key + "'");
    }
    try {
#define LRQAOA_FROM_JSON(field) \
    if (j.contains(#field)) j.at(#field).get_to(c.field);
        LRQAOA_CONFIG_FIELDS(LRQAOA_FROM_JSON)
#undef LRQAOA_FROM_JSON
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::ConfigError, std::string("bad configuration value: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string &path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::ConfigError, "cannot open configuration " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCode::ConfigError, "configuration " + path + ": " + e.what());
    }
    apply_json(base, j);
    return base;
}

/// Named presets. "desk" keeps CI runtimes bounded; "full" is the
/// N = 12..28 frame with sub-sizes up to 10.
inline ExperimentConfig profile(const std::string &name) {
    ExperimentConfig c;
    if (name == "desk") return c;
    if (name == "full") {
        c.n_min = 12;
        c.n_max = 28;
        c.n_step = 1;
        c.sub_sizes = {4, 6, 8, 10};
        c.direct_min_sizes = {12, 16, 20, 24, 28};
        c.brute_force_max_n = 28;
        c.simulator_limit = 28;
        c.classical_n_max = 0;
        return c;
    }
    fail(ErrorCode::ConfigError, "unknown profile '" + name + "' (expected desk or full)");
}

/// 64-bit FNV-1a of the canonical JSON text, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig &c) {
    const std::string text = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

// ---------------------------------------------------------------------------
// Instances

/// Builds instance `index` of size n for the configured family. Data sources
/// are loaded once per generator.
class InstanceFactory {
   public:
    explicit InstanceFactory(const ExperimentConfig &config) : config_(config) {
        if (config_.family == "portfolio") {
            universe_ = config_.portfolio_csv.empty()
                            ? generate_portfolio_universe(static_cast<std::size_t>(config_.universe_size),
                                                          derive_seed(config_.seed, {streams::kDataset, 0}),
                                                          config_.q_risk)
                            : ingest_portfolio_csv(config_.portfolio_csv, config_.q_risk);
        } else if (config_.family == "feature") {
            const FeatureTable table =
                config_.feature_csv.empty()
                    ? generate_feature_table(static_cast<std::size_t>(config_.feature_count), 1000,
                                             derive_seed(config_.seed, {streams::kDataset, 1}))
                    : parse_feature_table(csv::read_lines(config_.feature_csv));
            features_ = features_from_table(table, config_.feature_target, config_.phi);
        }
    }

    QuboInstance make(int n, int index) const {
        const std::uint64_t seed =
            derive_seed(config_.seed, {streams::kInstance, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(index)});
        const std::string label = config_.family + "-N" + std::to_string(n) + "-" + std::to_string(index);
        if (config_.family == "portfolio") {
            require(static_cast<std::size_t>(n) <= universe_->size(), ErrorCode::ConfigError,
                    "portfolio universe has only " + std::to_string(universe_->size()) + " assets");
            const auto idx = sample_indices(universe_->size(), static_cast<std::size_t>(n), seed);
            const PortfolioData data = universe_->select(idx);
            double penalty = 0.0;
            if (config_.penalty == "flip_bound") {
                penalty = flip_bound_penalty(data);
            } else if (config_.penalty == "sum_bound") {
                penalty = default_penalty(data);
            } else {
                penalty = *config_.parse_penalty_value();
            }
            return build_portfolio_qubo(data, n / 2, penalty, label);
        }
        if (config_.family == "feature") {
            const std::size_t total = features_->data.rho_fy.size();
            require(static_cast<std::size_t>(n) <= total, ErrorCode::ConfigError,
                    "feature data has only " + std::to_string(total) + " features");
            const auto idx = sample_indices(total, static_cast<std::size_t>(n), seed);
            FeatureData sub;
            sub.phi = features_->data.phi;
            sub.rho_ff = features_->data.rho_ff.principal(idx);
            for (std::size_t i : idx) sub.rho_fy.push_back(features_->data.rho_fy[i]);
            return build_feature_qubo(sub, label);
        }
        const ClusterData data = config_.cluster_dataset == "moons"
                                     ? generate_moons(static_cast<std::size_t>(n), config_.moons_noise, seed)
                                     : generate_blobs(static_cast<std::size_t>(n), {{0.0, 0.0}, {3.0, 3.0}},
                                                      config_.blobs_spread, seed);
        return build_clustering_qubo(data, label);
    }

    const std::optional<PortfolioData> &universe() const { return universe_; }

   private:
    ExperimentConfig config_;
    std::optional<PortfolioData> universe_;
    std::optional<FeatureIngest> features_;
};

// ---------------------------------------------------------------------------
// Results

struct InstanceResult {
    std::string family;
    int n = 0;
    std::string label;
    bool ok = true;
    std::string error;
    int p_star = 0;
    double delta_gamma = 0.0;
    double delta_beta = 0.0;
    double p_opt_extr = 0.0;
    double p_opt_realized = 0.0;
    std::size_t optima_count = 0;
    double d_circuit = 0.0;
    double d_est = 0.0;
    double total_depth = 0.0;
    bool outlier = false;
};

struct DirectMinimumRow {
    int n = 0;
    std::string label;
    int p_extr = 0;
    double d_extr = 0.0;
    DirectMinimum direct;
};

struct NamedScalingFit {
    std::string name;
    ScalingFit fit;
};

struct FitSummary {
    std::vector<NamedScalingFit> scaling;
    std::optional<PowerLawFit> depth_power_law;  // geomean p* versus N
    std::vector<std::string> notes;              // fits that could not be computed
};

struct ResultsStore {
    nlohmann::json manifest;
    std::vector<InstanceResult> instances;
    std::vector<std::string> extrapolation_rows;  // formatted CSV lines
    std::vector<std::string> descent_rows;
    std::vector<RuntimeRecord> quantum;
    std::vector<RuntimeRecord> bruteforce;
    std::vector<RuntimeRecord> annealing;
    std::vector<DirectMinimumRow> direct;
    FitSummary fits;

    std::size_t failures() const {
        std::size_t count = 0;
        for (const auto &r : instances) count += r.ok ? 0 : 1;
        return count;
    }
};

inline std::vector<RuntimeRecord> quantum_records(const std::vector<InstanceResult> &instances) {
    std::vector<RuntimeRecord> out;
    for (const auto &r : instances) {
        if (!r.ok) continue;
        out.push_back(RuntimeRecord{static_cast<std::size_t>(r.n), r.label, 0, r.total_depth, !r.outlier, 0});
    }
    return out;
}

/// All scaling fits, computed from stored records only.
inline FitSummary compute_fits(const ResultsStore &store) {
    FitSummary s;
    auto attempt = [&](const std::string &name, const std::function<ScalingFit()> &fn) {
        try {
            s.scaling.push_back({name, fn()});
        } catch (const Error &e) {
            s.notes.push_back(name + ": " + e.what());
        }
    };
    attempt("quantum_total_depth", [&] { return fit_scaling_geomean(store.quantum); });
    attempt("classical_bruteforce", [&] { return fit_scaling_robust(store.bruteforce); });
    attempt("classical_annealing", [&] { return fit_scaling_robust(store.annealing); });

    std::map<int, std::vector<double>> p_by_n;
    for (const auto &r : store.instances) {
        if (r.ok) p_by_n[r.n].push_back(static_cast<double>(r.p_star));
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto &[n, ps] : p_by_n) pts.emplace_back(n, geometric_mean(ps));
    try {
        s.depth_power_law = fit_power_law(pts);
    } catch (const Error &e) {
        s.notes.push_back(std::string("depth_power_law: ") + e.what());
    }
    return s;
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

inline std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return csv::format_double(v);
}

inline double parse_field(const std::string &s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    return csv::parse_double(s, 0, 0);
}

}  // namespace detail

inline constexpr const char *kInstanceHeader =
    "family,n,instance,status,p_star,delta_gamma,delta_beta,p_opt_extr,p_opt_realized,optima_count,d_circuit,D_est,D,"
    "outlier,error";

inline void write_runtime_csv(const std::filesystem::path &path, const std::vector<RuntimeRecord> &records) {
    auto out = detail::open_output(path);
    out << kRuntimeHeader << '\n';
    for (const auto &r : records) {
        out << r.n << ',' << r.instance_label << ',' << r.repetition << ',' << detail::fmt(r.runtime_or_depth) << ','
            << (r.solved_optimally ? 1 : 0) << '\n';
    }
}

inline std::vector<RuntimeRecord> read_runtime_csv(const std::filesystem::path &path) {
    std::vector<RuntimeRecord> records;
    if (!std::filesystem::exists(path)) return records;
    const auto lines = csv::read_lines(path.string());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto c = csv::split(lines[i]);
        require(c.size() == 5, ErrorCode::ParseError, path.string() + " row " + std::to_string(i + 1) + ": expected 5 columns");
        records.push_back(RuntimeRecord{static_cast<std::size_t>(std::stoul(c[0])), c[1], std::stoi(c[2]),
                                        detail::parse_field(c[3]), c[4] == "1", 0});
    }
    return records;
}

inline void write_instances_csv(const std::filesystem::path &path, const std::vector<InstanceResult> &rows) {
    auto out = detail::open_output(path);
    out << kInstanceHeader << '\n';
    for (const auto &r : rows) {
        std::string quoted = r.error;
        std::replace(quoted.begin(), quoted.end(), '"', '\'');
        std::replace(quoted.begin(), quoted.end(), '\n', ' ');
        out << r.family << ',' << r.n << ',' << r.label << ',' << (r.ok ? "ok" : "failed") << ',' << r.p_star << ','
            << detail::fmt(r.delta_gamma) << ',' << detail::fmt(r.delta_beta) << ',' << detail::fmt(r.p_opt_extr) << ','
            << detail::fmt(r.p_opt_realized) << ',' << r.optima_count << ',' << detail::fmt(r.d_circuit) << ','
            << detail::fmt(r.d_est) << ',' << detail::fmt(r.total_depth) << ',' << (r.outlier ? 1 : 0) << ','
            << '"' << quoted << '"' << '\n';
    }
}

inline std::vector<InstanceResult> read_instances_csv(const std::filesystem::path &path) {
    std::vector<InstanceResult> rows;
    const auto lines = csv::read_lines(path.string());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        // The trailing error text is quoted and may contain commas.
        const std::string &line = lines[i];
        const auto quote = line.find('"');
        const std::string head = quote == std::string::npos ? line : line.substr(0, quote);
        auto c = csv::split(head);
        if (!c.empty() && c.back().empty()) c.pop_back();
        require(c.size() == 14, ErrorCode::ParseError,
                path.string() + " row " + std::to_string(i + 1) + ": expected 15 columns");
        InstanceResult r;
        r.family = c[0];
        r.n = std::stoi(c[1]);
        r.label = c[2];
        r.ok = c[3] == "ok";
        r.p_star = std::stoi(c[4]);
        r.delta_gamma = detail::parse_field(c[5]);
        r.delta_beta = detail::parse_field(c[6]);
        r.p_opt_extr = detail::parse_field(c[7]);
        r.p_opt_realized = detail::parse_field(c[8]);
        r.optima_count = std::stoul(c[9]);
        r.d_circuit = detail::parse_field(c[10]);
        r.d_est = detail::parse_field(c[11]);
        r.total_depth = detail::parse_field(c[12]);
        r.outlier = c[13] == "1";
        if (quote != std::string::npos) {
            const auto end = line.rfind('"');
            r.error = end > quote ? line.substr(quote + 1, end - quote - 1) : std::string{};
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void write_fits_csv(const std::filesystem::path &path, const FitSummary &fits) {
    auto out = detail::open_output(path);
    out << "name,method,slope,intercept,points_used,excluded,residual\n";
    for (const auto &f : fits.scaling) {
        out << f.name << ',' << to_string(f.fit.method) << ',' << detail::fmt(f.fit.alpha) << ','
            << detail::fmt(f.fit.intercept) << ',' << f.fit.points_used << ',' << f.fit.excluded << ','
            << detail::fmt(f.fit.residual) << '\n';
    }
    if (fits.depth_power_law) {
        // Power law p = a N^b: slope column holds b, intercept log10(a).
        out << "depth_power_law,power_law," << detail::fmt(fits.depth_power_law->b) << ','
            << detail::fmt(std::log10(fits.depth_power_law->a)) << ",0,0," << detail::fmt(fits.depth_power_law->residual)
            << '\n';
    }
}

/// Figure data: runtime versus N with geometric means and fitted lines,
/// schedule parameters versus N, and success probability versus N. Every
/// value is derived from the stored records.
inline void export_figures(const std::filesystem::path &dir, const ResultsStore &store) {
    auto fit_for = [&](const std::string &name) -> std::optional<ScalingFit> {
        for (const auto &f : store.fits.scaling) {
            if (f.name == name) return f.fit;
        }
        return std::nullopt;
    };
    {
        auto out = detail::open_output(dir / "fig_runtime_vs_n.csv");
        out << "series,n,instance,value\n";
        auto emit = [&](const std::string &series, const std::vector<RuntimeRecord> &records, bool median_reps) {
            std::map<std::size_t, std::map<std::string, std::vector<double>>> grouped;
            for (const auto &r : records) {
                if (std::isfinite(r.runtime_or_depth) && r.runtime_or_depth > 0.0) {
                    grouped[r.n][r.instance_label].push_back(r.runtime_or_depth);
                }
            }
            for (const auto &[n, by_label] : grouped) {
                std::vector<double> values;
                for (const auto &[label, v] : by_label) {
                    const double value = median_reps ? median(v) : v.front();
                    values.push_back(value);
                    out << series << ',' << n << ',' << label << ',' << detail::fmt(value) << '\n';
                }
                out << series << "_geomean," << n << ",," << detail::fmt(geometric_mean(values)) << '\n';
            }
            if (auto f = fit_for(series)) {
                for (const auto &[n, unused] : grouped) {
                    out << series << "_fit," << n << ",," << detail::fmt(std::exp2(f->alpha * n + f->intercept))
                        << '\n';
                }
            }
        };
        emit("quantum_total_depth", store.quantum, false);
        emit("classical_bruteforce", store.bruteforce, true);
        emit("classical_annealing", store.annealing, true);
        for (const auto &d : store.direct) {
            out << "quantum_direct_minimum," << d.n << ',' << d.label << ',' << detail::fmt(d.direct.total_depth) << '\n';
        }
    }
    {
        auto out = detail::open_output(dir / "fig_params_vs_n.csv");
        out << "series,n,instance,delta_gamma,delta_beta,p\n";
        std::map<int, std::vector<const InstanceResult *>> by_n;
        for (const auto &r : store.instances) {
            if (r.ok) by_n[r.n].push_back(&r);
        }
        for (const auto &[n, rows] : by_n) {
            std::vector<double> g, b, p;
            for (const auto *r : rows) {
                out << "instance," << n << ',' << r->label << ',' << detail::fmt(r->delta_gamma) << ','
                    << detail::fmt(r->delta_beta) << ',' << r->p_star << '\n';
                g.push_back(r->delta_gamma);
                b.push_back(r->delta_beta);
                p.push_back(r->p_star);
            }
            out << "geomean," << n << ",," << detail::fmt(geometric_mean(g)) << ',' << detail::fmt(geometric_mean(b))
                << ',' << detail::fmt(geometric_mean(p)) << '\n';
            if (store.fits.depth_power_law) {
                const auto &f = *store.fits.depth_power_law;
                out << "p_power_law," << n << ",,,," << detail::fmt(f.a * std::pow(static_cast<double>(n), f.b))
                    << '\n';
            }
        }
        for (const auto &d : store.direct) {
            out << "direct_minimum," << d.n << ',' << d.label << ',' << detail::fmt(std::pow(10.0, d.direct.log_gamma))
                << ',' << detail::fmt(std::pow(10.0, d.direct.log_beta)) << ',' << d.direct.p << '\n';
        }
    }
    {
        auto out = detail::open_output(dir / "fig_popt_vs_n.csv");
        out << "series,n,instance,p_opt\n";
        std::map<int, std::vector<double>> by_n;
        for (const auto &r : store.instances) {
            if (!r.ok || !(r.p_opt_realized > 0.0)) continue;
            out << "instance," << r.n << ',' << r.label << ',' << detail::fmt(r.p_opt_realized) << '\n';
            by_n[r.n].push_back(r.p_opt_realized);
        }
        for (const auto &[n, ps] : by_n) out << "geomean," << n << ",," << detail::fmt(geometric_mean(ps)) << '\n';
    }
}

inline void write_store(const std::filesystem::path &dir, const ResultsStore &store) {
    std::filesystem::create_directories(dir);
    write_instances_csv(dir / "instances.csv", store.instances);
    {
        auto out = detail::open_output(dir / "extrapolation_traces.csv");
        out << kExtrapolationHeader << '\n';
        for (const auto &row : store.extrapolation_rows) out << row;
    }
    {
        auto out = detail::open_output(dir / "descent_traces.csv");
        out << kDescentHeader << '\n';
        for (const auto &row : store.descent_rows) out << row;
    }
    write_runtime_csv(dir / "quantum_runtime.csv", store.quantum);
    write_runtime_csv(dir / "classical_bruteforce.csv", store.bruteforce);
    write_runtime_csv(dir / "classical_annealing.csv", store.annealing);
    {
        auto out = detail::open_output(dir / "direct_minimization.csv");
        out << "n,instance,p_extr,D_extr,p_direct,log_gamma,log_beta,D_direct,p_opt_direct,improvement\n";
        for (const auto &d : store.direct) {
            out << d.n << ',' << d.label << ',' << d.p_extr << ',' << detail::fmt(d.d_extr) << ',' << d.direct.p << ','
                << detail::fmt(d.direct.log_gamma) << ',' << detail::fmt(d.direct.log_beta) << ','
                << detail::fmt(d.direct.total_depth) << ',' << detail::fmt(d.direct.p_opt) << ','
                << detail::fmt(d.d_extr / d.direct.total_depth) << '\n';
        }
    }
    write_fits_csv(dir / "fits.csv", store.fits);
    export_figures(dir, store);
    auto out = detail::open_output(dir / "manifest.json");
    out << store.manifest.dump(2) << '\n';
}

/// Reloads the records a previous run persisted (instances and runtime
/// tables); enough to recompute fits and figure data.
inline ResultsStore read_store(const std::filesystem::path &dir) {
    require(std::filesystem::exists(dir / "instances.csv"), ErrorCode::IoError,
            "no instances.csv in " + dir.string());
    ResultsStore store;
    store.instances = read_instances_csv(dir / "instances.csv");
    store.quantum = read_runtime_csv(dir / "quantum_runtime.csv");
    store.bruteforce = read_runtime_csv(dir / "classical_bruteforce.csv");
    store.annealing = read_runtime_csv(dir / "classical_annealing.csv");
    if (std::filesystem::exists(dir / "manifest.json")) {
        std::ifstream in(dir / "manifest.json");
        try {
            in >> store.manifest;
        } catch (const nlohmann::json::exception &e) {
            fail(ErrorCode::ParseError, std::string("manifest.json: ") + e.what());
        }
    }
    if (std::filesystem::exists(dir / "direct_minimization.csv")) {
        const auto lines = csv::read_lines((dir / "direct_minimization.csv").string());
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto c = csv::split(lines[i]);
            require(c.size() == 10, ErrorCode::ParseError, "direct_minimization.csv: expected 10 columns");
            DirectMinimumRow d;
            d.n = std::stoi(c[0]);
            d.label = c[1];
            d.p_extr = std::stoi(c[2]);
            d.d_extr = detail::parse_field(c[3]);
            d.direct.p = std::stoi(c[4]);
            d.direct.log_gamma = detail::parse_field(c[5]);
            d.direct.log_beta = detail::parse_field(c[6]);
            d.direct.total_depth = detail::parse_field(c[7]);
            d.direct.p_opt = detail::parse_field(c[8]);
            store.direct.push_back(d);
        }
    }
    return store;
}

using ProgressSink = std::function<void(const std::string &)>;

/// Full pipeline: per size and instance, depth optimization driven by the
/// sub-instance chain and one full-size simulation; optional direct
/// minimization on selected sizes; classical baselines; scaling fits; files.
inline ResultsStore run_experiment(const ExperimentConfig &config, const ProgressSink &progress = {}) {
    config.validate();
    const std::string hash = config_hash(config);
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    auto say = [&](const std::string &msg) {
        if (progress) progress(msg);
    };

    const auto started = std::chrono::system_clock::now();
    InstanceFactory factory(config);
    std::unique_ptr<ChainCache> cache;
    if (config.use_chain_cache) cache = std::make_unique<ChainCache>((dir / "chain_cache.json").string());

    ResultsStore store;
    const ChainConfig chain = config.chain_config();
    int previous_p = config.p0;
    for (int n : config.sizes()) {
        for (int k = 0; k < config.instances_per_size; ++k) {
            InstanceResult row;
            row.family = config.family;
            row.n = n;
            row.label = config.family + "-N" + std::to_string(n) + "-" + std::to_string(k);
            try {
                const QuboInstance instance = factory.make(n, k);
                const std::uint64_t seed = derive_seed(
                    config.seed, {streams::kSubInstance, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)});
                DepthOptimizer optimizer(instance, chain, seed, hash, cache.get());
                const DepthOptimizationResult r = optimizer.optimize_depth(previous_p);
                previous_p = r.p_star;
                row.p_star = r.p_star;
                row.delta_gamma = r.chain.extrapolation.delta_gamma_extr;
                row.delta_beta = r.chain.extrapolation.delta_beta_extr;
                row.p_opt_extr = r.chain.extrapolation.p_opt_extr;
                row.p_opt_realized = r.p_opt_realized;
                row.optima_count = r.optima_count;
                row.d_circuit = r.d_circuit;
                row.d_est = r.d_est;
                row.total_depth = r.total_depth;
                row.outlier = r.outlier;

                std::ostringstream ex, de;
                write_extrapolation_rows(ex, row.label, r.chain.optima, r.chain.extrapolation);
                write_descent_rows(de, row.label, r);
                store.extrapolation_rows.push_back(ex.str());
                store.descent_rows.push_back(de.str());

                const bool direct = std::find(config.direct_min_sizes.begin(), config.direct_min_sizes.end(), n) !=
                                        config.direct_min_sizes.end() &&
                                    k < config.direct_min_instances;
                if (direct && !r.outlier) {
                    DirectMinimumRow d{n, row.label, r.p_star, r.total_depth, minimize_realized_depth(optimizer, r)};
                    store.direct.push_back(d);
                }
                std::ostringstream msg;
                msg << row.label << ": p*=" << r.p_star << " P_extr=" << r.chain.extrapolation.p_opt_extr
                    << " P=" << r.p_opt_realized << " D=" << r.total_depth;
                say(msg.str());
            } catch (const Error &e) {
                row.ok = false;
                row.error = e.what();
                say(row.label + ": failed: " + e.what());
            }
            store.instances.push_back(row);
        }
    }
    if (cache) cache->save();
    store.quantum = quantum_records(store.instances);

    std::vector<QuboInstance> classical;
    std::vector<std::string> classical_failures;
    for (int n : config.classical_sizes()) {
        for (int k = 0; k < config.instances_per_size; ++k) {
            try {
                classical.push_back(factory.make(n, k));
            } catch (const Error &e) {
                classical_failures.push_back(config.family + "-N" + std::to_string(n) + "-" + std::to_string(k) + ": " +
                                             e.what());
            }
        }
    }
    RuntimeOptions ro;
    ro.repetitions = config.classical_repetitions;
    ro.annealing_budget = config.annealing_budget;
    ro.wall_limit_seconds = config.classical_wall_limit;
    ro.use_work_units = config.deterministic;
    ro.brute_force.max_n = static_cast<std::size_t>(config.brute_force_max_n);
    ro.seed = config.seed;
    say("classical baselines on " + std::to_string(classical.size()) + " instances");
    store.bruteforce = measure_classical_runtime(classical, ClassicalSolver::BruteForce, ro);
    store.annealing = measure_classical_runtime(classical, ClassicalSolver::Annealing, ro);

    store.fits = compute_fits(store);

    nlohmann::json m;
    m["config"] = to_json(config);
    m["config_hash"] = hash;
    m["master_seed"] = config.seed;
    m["seed_derivation"] = "splitmix64 chain over (stream, n, index)";
    m["classical_runtime_unit"] = config.deterministic ? "work_units" : "seconds";
    m["depth_model"] = config.depth_coefficient > 0.0 ? "coefficient*N per QAOA layer" : "(N+1) per QAOA layer";
    m["failures"] = nlohmann::json::array();
    for (const auto &r : store.instances) {
        if (!r.ok) m["failures"].push_back({{"instance", r.label}, {"error", r.error}});
    }
    m["classical_failures"] = classical_failures;
    std::size_t outliers = 0;
    for (const auto &r : store.instances) outliers += r.outlier ? 1 : 0;
    m["outliers"] = outliers;
    for (const auto &f : store.fits.scaling) {
        m["fits"][f.name] = {{"alpha", f.fit.alpha}, {"intercept", f.fit.intercept}, {"method", to_string(f.fit.method)},
                             {"points_used", f.fit.points_used}, {"excluded", f.fit.excluded},
                             {"residual", f.fit.residual}};
    }
    if (store.fits.depth_power_law) {
        m["fits"]["depth_power_law"] = {{"a", store.fits.depth_power_law->a}, {"b", store.fits.depth_power_law->b},
                                        {"residual", store.fits.depth_power_law->residual}};
    }
    m["fit_notes"] = store.fits.notes;
    if (!config.deterministic) {
        const std::time_t t0 = std::chrono::system_clock::to_time_t(started);
        const std::time_t t1 = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        m["started"] = static_cast<std::int64_t>(t0);
        m["finished"] = static_cast<std::int64_t>(t1);
    }
    store.manifest = m;
    write_store(dir, store);
    return store;
}

}  // namespace lrqaoa

#endif  // LRQAOA_EXPERIMENT_HPP
