// include/phonsim/synthetic.h

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

#ifndef PHONSIM_SYNTHETIC_H_
#define PHONSIM_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "phonsim/arpa_lm.h"
#include "phonsim/confusion_matrix.h"
#include "phonsim/corpus.h"

namespace phonsim {

/// Knobs for a synthetic noisy-channel corpus.
///
/// The lexicon holds clusters of confusable words: a random base
/// pronunciation plus variants that swap in confusable phones, one
/// position at a time until those are used up. Sentences are drawn from a Zipfian unigram model over the
/// vocabulary (ranks shuffled), which also serves as the language model.
/// The simulated recognizer sees, per phone, a two-way posterior that
/// puts `peak` on an outcome drawn from the ground-truth confusion row and
/// the rest on a runner-up, and decodes it with the lexicon and the
/// language model.
struct SyntheticOptions {
  uint64_t seed = 20181018;
  size_t base_words = 5;
  size_t variants_per_base = 29;
  size_t sentences = 500;
  size_t min_sentence_words = 5;
  size_t max_sentence_words = 9;
  double phone_error_rate = 0.25;
  size_t competitors = 3;
  double peak = 0.97;
  double end_probability = 0.2;
  // 0 gives a uniform unigram model.
  double zipf_exponent = 0.0;
};

struct SyntheticCorpus {
  Lexicon lexicon;
  ArpaModel lm;
  ConfusionMatrix truth;
  ParallelCorpus corpus;
};

SyntheticCorpus GenerateSyntheticCorpus(const PhoneInventory &inventory,
                                        const SyntheticOptions &opts = {});

// Writes lexicon.txt, lm.arpa, truth.confmat, corpus.tsv into `dir`.
void WriteSyntheticCorpus(const std::string &dir, const SyntheticCorpus &data,
                          const PhoneInventory &inventory);

}  // namespace phonsim

#endif  // PHONSIM_SYNTHETIC_H_
