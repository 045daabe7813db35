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

#ifndef LRQAOA_BASELINE_HPP
#define LRQAOA_BASELINE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lrqaoa/qubo.hpp"
#include "lrqaoa/rng.hpp"

namespace lrqaoa {

struct AnnealingOptions {
    int sweeps_per_restart = 200;
    double final_temperature_ratio = 1e-4;
    std::optional<double> target_value;  // stop once reached (time-to-optimum runs)
    double target_tolerance = 1e-9;
    double wall_limit_seconds = std::numeric_limits<double>::infinity();
};

struct AnnealingResult {
    std::vector<std::uint8_t> bits;
    double value = 0.0;
    double time_to_best = 0.0;  // seconds from start until the best was first seen
    std::uint64_t flips_to_best = 0;
    std::uint64_t flips = 0;
    bool reached_target = false;
    bool timed_out = false;
};

/// Single-flip Metropolis annealing with a geometric temperature schedule,
/// restarted from a fresh random state every sweeps_per_restart sweeps until
/// the sweep budget is spent. The trajectory depends only on the seed.
inline AnnealingResult simulated_annealing_solve(const QuboInstance &instance, int budget, std::uint64_t seed,
                                                 const AnnealingOptions &options = {}) {
    require(budget >= 1, ErrorCode::InvalidArgument, "annealing budget must be at least one sweep");
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const std::size_t n = instance.n();
    const SquareMatrix &q = instance.matrix();
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);

    double flip_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(q(i, i));
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) row += 2.0 * std::abs(q(i, j));
        }
        flip_scale = std::max(flip_scale, row);
    }
    const double t_initial = flip_scale > 0.0 ? 0.5 * flip_scale : 1.0;
    const int per_restart = std::max(1, std::min(options.sweeps_per_restart, budget));
    const double cooling = per_restart > 1 ? std::pow(options.final_temperature_ratio, 1.0 / (per_restart - 1)) : 1.0;

    AnnealingResult result;
    result.value = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> z(n);
    std::vector<double> field(n);
    int sweeps_done = 0;
    while (sweeps_done < budget && !result.reached_target && !result.timed_out) {
        for (auto &b : z) b = static_cast<std::uint8_t>(coin(rng));
        std::fill(field.begin(), field.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (z[j]) field[i] += q(i, j);
            }
        }
        double value = evaluate(instance, z);
        auto consider = [&] {
            if (value < result.value) {
                result.value = value;
                result.bits = z;
                result.time_to_best = std::chrono::duration<double>(clock::now() - start).count();
                result.flips_to_best = result.flips;
                if (options.target_value && value <= *options.target_value + options.target_tolerance) {
                    result.reached_target = true;
                }
            }
        };
        consider();
        double temperature = t_initial;
        for (int sweep = 0; sweep < per_restart && sweeps_done < budget && !result.reached_target; ++sweep) {
            for (std::size_t k = 0; k < n; ++k) {
                const bool on = z[k] == 0;
                const double delta = on ? q(k, k) + 2.0 * field[k] : -(2.0 * field[k] - q(k, k));
                if (delta <= 0.0 || unit(rng) < std::exp(-delta / temperature)) {
                    z[k] = on ? 1 : 0;
                    const double sign = on ? 1.0 : -1.0;
                    for (std::size_t j = 0; j < n; ++j) field[j] += sign * q(j, k);
                    value += delta;
                    ++result.flips;
                    consider();
                    if (result.reached_target) break;
                }
            }
            temperature *= cooling;
            ++sweeps_done;
            if (std::chrono::duration<double>(clock::now() - start).count() > options.wall_limit_seconds) {
                result.timed_out = true;
                break;
            }
        }
    }
    // The running value accumulates rounding; report the exact cost.
    result.value = evaluate(instance, result.bits);
    return result;
}

enum class ClassicalSolver { BruteForce, Annealing };

inline const char *to_string(ClassicalSolver solver) {
    return solver == ClassicalSolver::BruteForce ? "bruteforce" : "annealing";
}

/// One timing (classical) or total-depth (quantum) observation.
struct RuntimeRecord {
    std::size_t n = 0;
    std::string instance_label;
    int repetition = 0;
    double runtime_or_depth = 0.0;  // seconds, deterministic work units, or total depth D
    bool solved_optimally = false;
    std::uint64_t work_units = 0;
};

struct RuntimeOptions {
    int repetitions = 5;
    int annealing_budget = 2000;
    double wall_limit_seconds = 60.0;
    bool use_work_units = false;  // report operation counts instead of seconds
    BruteForceOptions brute_force{};
    std::uint64_t seed = 0;
};

/// Times every instance `repetitions` times. Brute force records the full
/// enumeration; annealing records the time at which the exact optimum was
/// first reached (or the whole run when it never was). Instances beyond the
/// brute-force limit get a timeout sentinel.
inline std::vector<RuntimeRecord> measure_classical_runtime(const std::vector<QuboInstance> &instances,
                                                            ClassicalSolver solver, const RuntimeOptions &options = {}) {
    using clock = std::chrono::steady_clock;
    std::map<std::size_t, std::vector<const QuboInstance *>> by_size;
    for (const auto &inst : instances) by_size[inst.n()].push_back(&inst);

    std::vector<RuntimeRecord> records;
    for (const auto &[n, group] : by_size) {
        for (std::size_t idx = 0; idx < group.size(); ++idx) {
            const QuboInstance &inst = *group[idx];
            std::optional<BruteForceResult> reference;
            if (n <= options.brute_force.max_n) reference = brute_force_solve(inst, options.brute_force);
            for (int rep = 0; rep < options.repetitions; ++rep) {
                RuntimeRecord rec{n, inst.label(), rep, 0.0, false, 0};
                if (solver == ClassicalSolver::BruteForce) {
                    if (!reference) {
                        rec.runtime_or_depth = std::numeric_limits<double>::infinity();
                    } else {
                        const auto t0 = clock::now();
                        const BruteForceResult r = brute_force_solve(inst, options.brute_force);
                        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
                        rec.work_units = r.evaluations;
                        rec.solved_optimally = true;
                        rec.runtime_or_depth = options.use_work_units ? static_cast<double>(r.evaluations) : secs;
                    }
                } else {
                    AnnealingOptions ao;
                    ao.wall_limit_seconds = options.wall_limit_seconds;
                    if (reference) ao.target_value = reference->optimal_value;
                    const std::uint64_t seed =
                        derive_seed(options.seed, {streams::kAnnealing, n, idx, static_cast<std::uint64_t>(rep)});
                    const AnnealingResult r = simulated_annealing_solve(inst, options.annealing_budget, seed, ao);
                    rec.solved_optimally =
                        reference && r.value <= reference->optimal_value + options.brute_force.tolerance;
                    rec.work_units = r.flips_to_best;
                    rec.runtime_or_depth = options.use_work_units ? static_cast<double>(std::max<std::uint64_t>(1, r.flips_to_best))
                                                                  : std::max(r.time_to_best, 1e-9);
                    if (r.timed_out && !rec.solved_optimally) {
                        rec.runtime_or_depth = std::numeric_limits<double>::infinity();
                    }
                }
                records.push_back(rec);
            }
        }
    }
    return records;
}

inline constexpr const char *kRuntimeHeader = "n,instance_label,repetition,runtime_or_depth,solved_optimally";

}  // namespace lrqaoa

#endif  // LRQAOA_BASELINE_HPP
