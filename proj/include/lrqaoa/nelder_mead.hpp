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

#ifndef LRQAOA_NELDER_MEAD_HPP
#define LRQAOA_NELDER_MEAD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace lrqaoa {

struct NelderMeadOptions {
    int max_iterations = 2000;
    double x_tolerance = 1e-9;
    double f_tolerance = 1e-15;
    // Rebuild the simplex around the incumbent after convergence while the
    // iteration budget lasts; guards against collapsed simplices.
    bool restart = true;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection/expansion/
/// contraction/shrink coefficients 1, 2, 1/2, 1/2). Non-finite objective
/// values are treated as +infinity.
template <typename Objective>
NelderMeadResult nelder_mead(Objective &&objective, std::vector<double> x0, const std::vector<double> &steps,
                             const NelderMeadOptions &options = {}) {
    const std::size_t dim = x0.size();
    auto eval = [&](const std::vector<double> &x) {
        double v = objective(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    NelderMeadResult result;
    result.x = x0;
    result.value = eval(x0);
    if (dim == 0) {
        result.converged = true;
        return result;
    }

    std::vector<std::vector<double>> simplex(dim + 1);
    std::vector<double> values(dim + 1);
    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    int iterations = 0;
    double previous_best = result.value;

    for (;;) {
        simplex[0] = result.x;
        values[0] = result.value;
        for (std::size_t i = 0; i < dim; ++i) {
            simplex[i + 1] = result.x;
            simplex[i + 1][i] += steps[i] != 0.0 ? steps[i] : 1e-3;
            values[i + 1] = eval(simplex[i + 1]);
        }

        bool converged = false;
        while (iterations < options.max_iterations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second = order[dim - 1];

            double diameter = 0.0;
            for (std::size_t v = 0; v <= dim; ++v) {
                for (std::size_t i = 0; i < dim; ++i) {
                    diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[best][i]));
                }
            }
            if (diameter <= options.x_tolerance &&
                (values[worst] - values[best] <= options.f_tolerance || !std::isfinite(values[worst]))) {
                converged = true;
                break;
            }
            ++iterations;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t v = 0; v <= dim; ++v) {
                if (v == worst) continue;
                for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
            }
            for (double &c : centroid) c /= static_cast<double>(dim);

            for (std::size_t i = 0; i < dim; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
            const double reflected = eval(trial);
            if (reflected < values[best]) {
                for (std::size_t i = 0; i < dim; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - simplex[worst][i]);
                const double expanded = eval(trial2);
                if (expanded < reflected) {
                    simplex[worst] = trial2;
                    values[worst] = expanded;
                } else {
                    simplex[worst] = trial;
                    values[worst] = reflected;
                }
                continue;
            }
            if (reflected < values[second]) {
                simplex[worst] = trial;
                values[worst] = reflected;
                continue;
            }
            const bool outside = reflected < values[worst];
            for (std::size_t i = 0; i < dim; ++i) {
                trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                    : centroid[i] + 0.5 * (simplex[worst][i] - centroid[i]);
            }
            const double contracted = eval(trial2);
            if (contracted < std::min(reflected, values[worst])) {
                simplex[worst] = trial2;
                values[worst] = contracted;
                continue;
            }
            for (std::size_t v = 0; v <= dim; ++v) {
                if (v == best) continue;
                for (std::size_t i = 0; i < dim; ++i) {
                    simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
                }
                values[v] = eval(simplex[v]);
            }
        }

        const auto best_it = std::min_element(values.begin(), values.end());
        const std::size_t best = static_cast<std::size_t>(best_it - values.begin());
        if (values[best] <= result.value) {
            result.x = simplex[best];
            result.value = values[best];
        }
        result.converged = converged;
        const bool improved = previous_best - result.value > options.f_tolerance;
        previous_best = result.value;
        if (!converged || !options.restart || !improved || iterations >= options.max_iterations) {
            break;
        }
    }
    result.iterations = iterations;
    return result;
}

}  // namespace lrqaoa

#endif  // LRQAOA_NELDER_MEAD_HPP
