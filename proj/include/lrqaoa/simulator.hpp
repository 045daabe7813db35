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

#ifndef LRQAOA_SIMULATOR_HPP
#define LRQAOA_SIMULATOR_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lrqaoa/error.hpp"
#include "lrqaoa/qubo.hpp"
#include "lrqaoa/schedule.hpp"

namespace lrqaoa {

using Amplitude = std::complex<double>;

/// Amplitude index is the little-endian packed bitstring (bit i is z_i).
struct Statevector {
    std::size_t n = 0;
    std::vector<Amplitude> amplitudes;

    double norm_squared() const {
        double total = 0.0;
        for (const Amplitude &a : amplitudes) total += std::norm(a);
        return total;
    }

    double probability(std::uint64_t index) const { return std::norm(amplitudes.at(index)); }
};

struct SuccessProbability {
    double p_opt = 0.0;
    std::size_t optima_count = 0;
};

inline constexpr std::size_t kDefaultSimulatorLimit = 26;

/// A QUBO with its diagonal cost table precomputed and its optimum set known;
/// the unit the grid search evaluates repeatedly.
struct PreparedInstance {
    std::size_t n = 0;
    std::vector<double> costs;
    BruteForceResult optima;

    static PreparedInstance from(const QuboInstance &instance, const BruteForceOptions &bf = {}) {
        return PreparedInstance{instance.n(), cost_table(instance), brute_force_solve(instance, bf)};
    }
};

namespace detail {

inline void apply_cost_layer(std::vector<Amplitude> &psi, std::span<const double> costs, double gamma) {
    if (gamma == 0.0) return;
    for (std::size_t z = 0; z < psi.size(); ++z) {
        const double phase = -gamma * costs[z];
        psi[z] *= Amplitude(std::cos(phase), std::sin(phase));
    }
}

/// exp(+i beta X) on every qubit: [[c, i s], [i s, c]] butterflies.
inline void apply_mixer_layer(std::vector<Amplitude> &psi, std::size_t n, double beta) {
    if (beta == 0.0) return;
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    const std::size_t dim = psi.size();
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t stride = std::size_t{1} << q;
        for (std::size_t block = 0; block < dim; block += 2 * stride) {
            Amplitude *lo = &psi[block];
            Amplitude *hi = &psi[block + stride];
            for (std::size_t k = 0; k < stride; ++k) {
                const Amplitude a = lo[k];
                const Amplitude b = hi[k];
                lo[k] = Amplitude(c * a.real() - s * b.imag(), c * a.imag() + s * b.real());
                hi[k] = Amplitude(c * b.real() - s * a.imag(), c * b.imag() + s * a.real());
            }
        }
    }
}

}  // namespace detail

/// Runs |psi> = prod_j U_M(beta_j) U_F(gamma_j) |+>^n on a precomputed cost
/// table with 2^n entries.
inline Statevector simulate_costs(std::span<const double> costs, std::size_t n, const LinearRampSchedule &schedule,
                                  std::size_t limit = kDefaultSimulatorLimit) {
    require(n <= limit, ErrorCode::SizeLimit,
            "simulator limited to n <= " + std::to_string(limit) + ", got " + std::to_string(n));
    require(costs.size() == (std::size_t{1} << n), ErrorCode::DimensionMismatch, "cost table does not have 2^n entries");
    Statevector state{n, std::vector<Amplitude>(costs.size(), Amplitude(std::pow(2.0, -0.5 * static_cast<double>(n)), 0.0))};
    for (int j = 0; j < schedule.p; ++j) {
        detail::apply_cost_layer(state.amplitudes, costs, schedule.gammas[j]);
        detail::apply_mixer_layer(state.amplitudes, n, schedule.betas[j]);
    }
    return state;
}

inline Statevector simulate(const QuboInstance &instance, const LinearRampSchedule &schedule,
                            std::size_t limit = kDefaultSimulatorLimit) {
    require(instance.n() <= limit, ErrorCode::SizeLimit,
            "simulator limited to n <= " + std::to_string(limit) + ", got " + std::to_string(instance.n()));
    const std::vector<double> costs = cost_table(instance);
    return simulate_costs(costs, instance.n(), schedule, limit);
}

/// Probability mass on the whole degenerate optimum set.
inline SuccessProbability success_probability(const Statevector &state, const BruteForceResult &optima) {
    require(state.n == optima.n && state.amplitudes.size() == (std::size_t{1} << optima.n),
            ErrorCode::DimensionMismatch,
            "state has " + std::to_string(state.n) + " qubits, optimum set belongs to n = " + std::to_string(optima.n));
    double p = 0.0;
    for (std::uint64_t z : optima.optimal_bitstrings) {
        require(z < state.amplitudes.size(), ErrorCode::DimensionMismatch,
                "optimal bitstring lies outside the state dimension");
        p += std::norm(state.amplitudes[z]);
    }
    return SuccessProbability{std::min(1.0, std::max(0.0, p)), optima.optimal_bitstrings.size()};
}

inline SuccessProbability success_probability(const PreparedInstance &prepared, const LinearRampSchedule &schedule) {
    return success_probability(simulate_costs(prepared.costs, prepared.n, schedule), prepared.optima);
}

}  // namespace lrqaoa

#endif  // LRQAOA_SIMULATOR_HPP
