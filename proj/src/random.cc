// src/random.cc

// Copyright 2026  phonsim authors

// See ../COPYING for clarification regarding multiple authors
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

#include "phonsim/random.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "phonsim/error.h"

namespace phonsim {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

size_t Rng::UniformIndex(size_t n) {
  if (n == 0) throw Error(ErrorKind::kContract, "UniformIndex over empty range");
  size_t index = static_cast<size_t>(Uniform01() * static_cast<double>(n));
  return std::min(index, n - 1);
}

size_t Rng::Categorical(std::span<const double> weights) {
  double total = 0.0;
  size_t last_positive = weights.size();
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0)
      throw Error(ErrorKind::kContract, "negative categorical weight");
    if (weights[i] > 0.0) last_positive = i;
    total += weights[i];
  }
  if (!(total > 0.0))
    throw Error(ErrorKind::kContract, "categorical weights sum to zero");
  double target = Uniform01() * total;
  double cumulative = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  // Rounding left target at the top of the range.
  return last_positive;
}

uint64_t DeriveSeed(uint64_t seed, std::string_view key) {
  uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : key) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return SplitMix64(SplitMix64(seed) ^ hash);
}

std::vector<size_t> SampleWithoutReplacement(std::span<const double> weights,
                                             size_t count, Rng &rng) {
  std::vector<double> remaining(weights.begin(), weights.end());
  size_t support = std::count_if(remaining.begin(), remaining.end(),
                                 [](double w) { return w > 0.0; });
  std::vector<size_t> drawn;
  for (size_t n = std::min(count, support); n > 0; --n) {
    size_t index = rng.Categorical(remaining);
    drawn.push_back(index);
    remaining[index] = 0.0;
  }
  return drawn;
}

std::vector<std::pair<size_t, double>> SampleRankReweighted(
    std::span<const double> weights, size_t count, Rng &rng) {
  std::vector<size_t> drawn = SampleWithoutReplacement(weights, count, rng);
  std::vector<double> ranked(weights.begin(), weights.end());
  std::sort(ranked.begin(), ranked.end(), std::greater<>());
  double total = 0.0;
  for (size_t i = 0; i < drawn.size(); ++i) total += ranked[i];
  std::vector<std::pair<size_t, double>> result;
  result.reserve(drawn.size());
  for (size_t i = 0; i < drawn.size(); ++i)
    result.emplace_back(drawn[i], ranked[i] / total);
  return result;
}

}  // namespace phonsim
