// Copyright 2026 The CHOKE Engine Authors.
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <random>
#include <vector>

namespace choke {

// Independent generator for (seed, stream). Permutation i always draws from
// stream i, so results do not depend on how work is split across threads.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Uniform k-subset without replacement, in population order.
template <typename T>
std::vector<T> sample_without_replacement(const std::vector<T>& population,
                                          std::size_t k, std::mt19937_64& rng) {
  std::vector<T> out;
  out.reserve(k);
  std::sample(population.begin(), population.end(), std::back_inserter(out), k,
              rng);
  return out;
}

}  // namespace choke
