// include/phonsim/eval.h

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

#ifndef PHONSIM_EVAL_H_
#define PHONSIM_EVAL_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phonsim/corpus.h"

namespace phonsim {

// A maximal run of words outside the longest common subsequence: gold
// words [ref_begin, ref_end) were recognized as `hyp_span`.
struct ErrorChunk {
  size_t ref_begin = 0, ref_end = 0;
  size_t hyp_begin = 0, hyp_end = 0;
  WordSeq ref_span;
  WordSeq hyp_span;

  bool operator==(const ErrorChunk &) const = default;
};

// Matched (gold index, hyp index) pairs of a longest common subsequence;
// among optimal ones, each match is taken as early as possible.
std::vector<std::pair<size_t, size_t>> LongestCommonSubsequence(const WordSeq &gold,
                                                                const WordSeq &hyp);

// Chunks in left-to-right order; empty for identical sequences.
std::vector<ErrorChunk> ExtractErrorChunks(const WordSeq &gold, const WordSeq &hyp);

struct EvalItem {
  std::string id;
  WordSeq gold;
  WordSeq hyp;
};

// Simulated alternatives per utterance id, best first.
using Predictions = std::map<std::string, std::vector<WordSeq>>;

struct EvalOptions {
  size_t k = 100;
  // A predicted chunk must cover the same gold span (hence the same
  // error-free neighbours). Off: matching words anywhere suffice.
  bool anchored = true;
};

struct UtteranceScore {
  std::string id;
  size_t chunks = 0;
  size_t chunks_recalled = 0;
  bool utterance_recalled = false;
  bool has_predictions = false;
};

struct RecallReport {
  size_t k = 0;
  double chunk_recall = 0.0;      // percent
  double utterance_recall = 0.0;  // percent
  size_t total_chunks = 0;
  size_t recalled_chunks = 0;
  size_t total_utterances = 0;
  size_t recalled_utterances = 0;
  std::vector<UtteranceScore> per_utterance;
};

// Both metrics in one pass. Alternatives past k are ignored; utterances
// without predictions recall nothing. With no chunks at all the chunk
// recall is 0.
RecallReport EvaluateRecall(const std::vector<EvalItem> &test, const Predictions &predictions,
                            const EvalOptions &opts = {});

double ChunkRecallAtK(const std::vector<EvalItem> &test, const Predictions &predictions,
                      size_t k);
double UtteranceRecallAtK(const std::vector<EvalItem> &test, const Predictions &predictions,
                          size_t k);

// JSON summary {chunk_recall, utterance_recall, k, counts}.
void WriteRecallJson(std::ostream &os, const RecallReport &report);
// "id<TAB>chunks<TAB>chunks_recalled<TAB>utterance_recalled" with a header.
void WriteRecallTsv(std::ostream &os, const RecallReport &report);

}  // namespace phonsim

#endif  // PHONSIM_EVAL_H_
