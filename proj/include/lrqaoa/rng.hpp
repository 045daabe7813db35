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

#ifndef LRQAOA_RNG_HPP
#define LRQAOA_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lrqaoa {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream derivation: the seed of a stream depends only on the
/// parent seed and the path of counters leading to it, so adding instances or
/// sub-samples never shifts the streams of existing ones.
///
///   derive_seed(master, {stream_tag, size, instance_index})
inline std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(parent);
    for (std::uint64_t c : path) {
        s = mix64(s ^ mix64(c + 0x632be59bd9b4e019ULL));
    }
    return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

namespace streams {
inline constexpr std::uint64_t kInstance = 1;
inline constexpr std::uint64_t kSubInstance = 2;
inline constexpr std::uint64_t kAnnealing = 3;
inline constexpr std::uint64_t kDataset = 4;
}  // namespace streams

}  // namespace lrqaoa

#endif  // LRQAOA_RNG_HPP
