// include/phonsim/builders.h

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

#ifndef PHONSIM_BUILDERS_H_
#define PHONSIM_BUILDERS_H_

#include "phonsim/confusion_matrix.h"
#include "phonsim/corpus.h"
#include "phonsim/fst.h"

namespace phonsim {

// One loop state. An alternative of length n becomes phone:first-output
// followed by n-1 <eps>:output arcs through fresh states; deletions are
// phone:<eps>. The whole -ln(prob) sits on the first arc.
Fst BuildConfusionFst(const ConfusionMatrix &cm, const PhoneInventory &inventory);

enum class LexiconDirection { kPhonesToWords, kWordsToPhones };

struct LexiconFstOptions {
  // Weight each pronunciation -ln(1 / #pronunciations) instead of 0.
  bool weight_by_pronunciations = false;
};

// Phones-to-words: each pronunciation is a path from the start state that
// emits its word on the first arc and returns to the start, which is the
// only final state. Words-to-phones swaps the labels. `words` must contain
// every lexicon word.
Fst BuildLexiconFst(const Lexicon &lexicon, const PhoneInventory &inventory,
                    SymbolTablePtr words, LexiconDirection direction,
                    const LexiconFstOptions &opts = {});

}  // namespace phonsim

#endif  // PHONSIM_BUILDERS_H_
