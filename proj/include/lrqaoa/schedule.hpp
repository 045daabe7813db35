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

#ifndef LRQAOA_SCHEDULE_HPP
#define LRQAOA_SCHEDULE_HPP

#include <string>
#include <vector>

#include "lrqaoa/error.hpp"

namespace lrqaoa {

/// Linear ramp: gamma_j = dgamma x_j, beta_j = dbeta (1 - x_j) with
/// x_j = (j - 1/2) / p for j = 1..p.
struct LinearRampSchedule {
    double delta_gamma = 0.0;
    double delta_beta = 0.0;
    int p = 0;
    std::vector<double> gammas;
    std::vector<double> betas;
};

/// Skips the positivity checks; zero scales are legal here and give the
/// identity cost (or mixer) layers.
inline LinearRampSchedule build_schedule_unchecked(double delta_gamma, double delta_beta, int p) {
    require(p >= 1, ErrorCode::InvalidArgument, "schedule needs p >= 1, got " + std::to_string(p));
    LinearRampSchedule s{delta_gamma, delta_beta, p, std::vector<double>(p), std::vector<double>(p)};
    for (int j = 1; j <= p; ++j) {
        const double x = (static_cast<double>(j) - 0.5) / static_cast<double>(p);
        s.gammas[j - 1] = delta_gamma * x;
        s.betas[j - 1] = delta_beta * (1.0 - x);
    }
    return s;
}

inline LinearRampSchedule build_schedule(double delta_gamma, double delta_beta, int p) {
    require(delta_gamma > 0.0 && delta_beta > 0.0, ErrorCode::InvalidArgument,
            "ramp scales must be positive");
    return build_schedule_unchecked(delta_gamma, delta_beta, p);
}

}  // namespace lrqaoa

#endif  // LRQAOA_SCHEDULE_HPP
