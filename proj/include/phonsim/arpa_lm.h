// include/phonsim/arpa_lm.h

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

#ifndef PHONSIM_ARPA_LM_H_
#define PHONSIM_ARPA_LM_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phonsim/fst.h"

namespace phonsim {

inline constexpr const char *kSentenceStart = "<s>";
inline constexpr const char *kSentenceEnd = "</s>";

struct NgramEntry {
  double log10_prob = 0.0;
  double log10_backoff = 0.0;
};

// Backoff n-gram model as read from an ARPA file (orders 1-3).
struct ArpaModel {
  int order = 0;
  std::map<std::vector<std::string>, NgramEntry> ngrams;

  // Unigram vocabulary without <s> and </s>, sorted.
  std::vector<std::string> Vocabulary() const;
};

ArpaModel ParseArpa(std::istream &is, const std::string &source);
ArpaModel LoadArpa(const std::string &path);
void WriteArpa(std::ostream &os, const ArpaModel &model);

// Backoff acceptor with one state per history. Word arcs weigh
// -ln(10^log10 p); <eps> arcs carry the backoff weights; p(</s> | h) is
// folded into final weights through the backoff chain (a model without
// </s> makes every history final at weight 0). When `words` is
// given, n-grams over words missing from it are left out; otherwise a
// table is built from the model vocabulary.
Fst BuildLmFst(const ArpaModel &model, SymbolTablePtr words = nullptr);
Fst BuildLmFst(const std::string &arpa_path, SymbolTablePtr words = nullptr);

}  // namespace phonsim

#endif  // PHONSIM_ARPA_LM_H_
