// src/eval.cc

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

#include "phonsim/eval.h"

#include <ostream>
#include <set>
#include <tuple>

#include "json.hpp"
#include "phonsim/error.h"

namespace phonsim {

std::vector<std::pair<size_t, size_t>> LongestCommonSubsequence(const WordSeq &gold,
                                                                const WordSeq &hyp) {
  const size_t n = gold.size(), m = hyp.size();
  // suffix[i][j] = LCS length of gold[i:] and hyp[j:].
  std::vector<uint32_t> suffix((n + 1) * (m + 1), 0);
  auto at = [&](size_t i, size_t j) -> uint32_t & { return suffix[i * (m + 1) + j]; };
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      at(i, j) = gold[i] == hyp[j] ? at(i + 1, j + 1) + 1
                                   : std::max(at(i + 1, j), at(i, j + 1));
  std::vector<std::pair<size_t, size_t>> matches;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (gold[i] == hyp[j]) {
      matches.emplace_back(i++, j++);
    } else if (at(i + 1, j) >= at(i, j + 1)) {
      ++i;
    } else {
      ++j;
    }
  }
  return matches;
}

std::vector<ErrorChunk> ExtractErrorChunks(const WordSeq &gold, const WordSeq &hyp) {
  std::vector<ErrorChunk> chunks;
  size_t gi = 0, hj = 0;
  auto flush = [&](size_t g_end, size_t h_end) {
    if (g_end == gi && h_end == hj) return;
    ErrorChunk chunk;
    chunk.ref_begin = gi;
    chunk.ref_end = g_end;
    chunk.hyp_begin = hj;
    chunk.hyp_end = h_end;
    chunk.ref_span.assign(gold.begin() + gi, gold.begin() + g_end);
    chunk.hyp_span.assign(hyp.begin() + hj, hyp.begin() + h_end);
    chunks.push_back(std::move(chunk));
  };
  for (const auto &[g, h] : LongestCommonSubsequence(gold, hyp)) {
    flush(g, h);
    gi = g + 1;
    hj = h + 1;
  }
  flush(gold.size(), hyp.size());
  return chunks;
}

RecallReport EvaluateRecall(const std::vector<EvalItem> &test, const Predictions &predictions,
                            const EvalOptions &opts) {
  RecallReport report;
  report.k = opts.k;
  using AnchoredKey = std::tuple<size_t, size_t, WordSeq>;
  using LooseKey = std::pair<WordSeq, WordSeq>;
  for (const auto &item : test) {
    if (item.gold.empty())
      throw Error(ErrorKind::kContract, "utterance '" + item.id + "' has empty gold text");
    UtteranceScore score;
    score.id = item.id;
    const auto real = ExtractErrorChunks(item.gold, item.hyp);
    score.chunks = real.size();

    std::set<AnchoredKey> anchored;
    std::set<LooseKey> loose;
    if (auto it = predictions.find(item.id); it != predictions.end()) {
      score.has_predictions = true;
      const size_t limit = std::min(opts.k, it->second.size());
      for (size_t r = 0; r < limit; ++r) {
        const WordSeq &alt = it->second[r];
        if (alt == item.hyp) score.utterance_recalled = true;
        for (auto &chunk : ExtractErrorChunks(item.gold, alt)) {
          if (opts.anchored)
            anchored.emplace(chunk.ref_begin, chunk.ref_end, std::move(chunk.hyp_span));
          else
            loose.emplace(std::move(chunk.ref_span), std::move(chunk.hyp_span));
        }
      }
    }
    for (const auto &chunk : real) {
      bool hit = opts.anchored
                     ? anchored.count({chunk.ref_begin, chunk.ref_end, chunk.hyp_span}) > 0
                     : loose.count({chunk.ref_span, chunk.hyp_span}) > 0;
      score.chunks_recalled += hit;
    }
    report.total_chunks += score.chunks;
    report.recalled_chunks += score.chunks_recalled;
    report.recalled_utterances += score.utterance_recalled;
    report.per_utterance.push_back(std::move(score));
  }
  report.total_utterances = test.size();
  if (report.total_chunks)
    report.chunk_recall = 100.0 * report.recalled_chunks / report.total_chunks;
  if (report.total_utterances)
    report.utterance_recall = 100.0 * report.recalled_utterances / report.total_utterances;
  return report;
}

double ChunkRecallAtK(const std::vector<EvalItem> &test, const Predictions &predictions,
                      size_t k) {
  return EvaluateRecall(test, predictions, {k, true}).chunk_recall;
}

double UtteranceRecallAtK(const std::vector<EvalItem> &test, const Predictions &predictions,
                          size_t k) {
  return EvaluateRecall(test, predictions, {k, true}).utterance_recall;
}

void WriteRecallJson(std::ostream &os, const RecallReport &report) {
  nlohmann::ordered_json j;
  j["chunk_recall"] = report.chunk_recall;
  j["utterance_recall"] = report.utterance_recall;
  j["k"] = report.k;
  j["counts"] = {{"chunks", report.total_chunks},
                 {"chunks_recalled", report.recalled_chunks},
                 {"utterances", report.total_utterances},
                 {"utterances_recalled", report.recalled_utterances}};
  os << j.dump(2) << '\n';
}

void WriteRecallTsv(std::ostream &os, const RecallReport &report) {
  os << "id\tchunks\tchunks_recalled\tutterance_recalled\n";
  for (const auto &u : report.per_utterance)
    os << u.id << '\t' << u.chunks << '\t' << u.chunks_recalled << '\t'
       << (u.utterance_recalled ? 1 : 0) << '\n';
}

}  // namespace phonsim
