// include/phonsim/fst_ops.h

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

#ifndef PHONSIM_FST_OPS_H_
#define PHONSIM_FST_OPS_H_

#include <span>
#include <string>
#include <vector>

#include "phonsim/fst.h"

namespace phonsim {

// Acceptor with |labels| + 1 states and a single zero-weight path. Throws
// kSymbol on labels outside `symbols`.
Fst LinearChainFst(std::span<const Label> labels, SymbolTablePtr symbols);
Fst LinearChainFst(std::span<const std::string> symbols_in, SymbolTablePtr symbols);

// Removes states that are not both accessible and coaccessible. State order
// is otherwise kept.
void Connect(Fst *fst);

struct ComposeOptions {
  bool connect = true;
};

// Epsilon-filtered composition: output epsilons of `a` and input epsilons
// of `b` are interleaved in one canonical order so each pair of paths
// yields exactly one composed path. Throws kContract when a's output table
// differs from b's input table.
Fst Compose(const Fst &a, const Fst &b, const ComposeOptions &opts = {});

// Per state, the cheapest weight of reaching a final state (including the
// final weight); kInfinity when no final state is reachable. Throws
// kResource if relaxation does not settle (negative cycle).
std::vector<Weight> ShortestDistanceToFinal(const Fst &fst);

struct WeightedString {
  std::vector<Label> labels;  // output labels, epsilons removed
  Weight weight;
};

struct NBestOptions {
  // Upper bound on search-queue pops before giving up.
  size_t max_expansions = 2000000;
};

// The n cheapest distinct output strings, ascending by their best path
// weight. Ties keep discovery order. Returns fewer when the language is
// smaller. Throws kResource when the expansion cap is hit.
std::vector<WeightedString> NBestUniqueStrings(const Fst &fst, size_t n,
                                               const NBestOptions &opts = {});

// Lets the graph absorb any number of trailing <eos> inputs at `eos_cost`
// each: every final state gets an <eos>:<eps> arc (carrying its final
// weight) into a new final sink with an <eos>:<eps> self-loop. Throws
// kSymbol when the input table has no <eos>.
Fst EosAugment(const Fst &decode_graph, Weight eos_cost = 0.1);

}  // namespace phonsim

#endif  // PHONSIM_FST_OPS_H_
