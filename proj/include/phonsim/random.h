// include/phonsim/random.h

// Copyright 2026  phonsim authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PHONSIM_RANDOM_H_
#define PHONSIM_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace phonsim {

// Seeded generator whose derived draws are identical on every platform:
// std::mt19937_64 is fully specified, and the conversions below avoid the
// implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  size_t UniformIndex(size_t n);
  // Index drawn proportionally to nonnegative weights (need not sum to 1).
  size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

// Per-stream seed from a global seed and a stream key (e.g. an utterance
// id), independent of processing order.
uint64_t DeriveSeed(uint64_t seed, std::string_view key);

// Draws `count` distinct indices without replacement, each draw
// proportional to the remaining weights. Zero-weight entries are never
// drawn, so fewer than `count` indices come back when the support is small.
std::vector<size_t> SampleWithoutReplacement(std::span<const double> weights,
                                             size_t count, Rng &rng);

// Draws min(count, support) indices without replacement and pairs the i-th
// draw with the i-th largest weight of the whole distribution, renormalized
// over the drawn set.
std::vector<std::pair<size_t, double>> SampleRankReweighted(
    std::span<const double> weights, size_t count, Rng &rng);

}  // namespace phonsim

#endif  // PHONSIM_RANDOM_H_
