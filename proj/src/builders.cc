// src/builders.cc

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

#include "phonsim/builders.h"

#include <cmath>

#include "phonsim/error.h"

namespace phonsim {

Fst BuildConfusionFst(const ConfusionMatrix &cm, const PhoneInventory &inventory) {
  Fst fst(inventory.symbols(), inventory.symbols());
  StateId loop = fst.AddState();
  fst.SetStart(loop);
  fst.SetFinal(loop, 0.0);
  for (const auto &[input, row] : cm.rows()) {
    for (const auto &alt : row) {
      Weight weight = -std::log(alt.prob);
      if (alt.output.empty()) {
        fst.AddArc(loop, {input, kEpsilon, weight, loop});
        continue;
      }
      StateId prev = loop;
      for (size_t i = 0; i < alt.output.size(); ++i) {
        bool last = i + 1 == alt.output.size();
        StateId next = last ? loop : fst.AddState();
        fst.AddArc(prev, {i == 0 ? input : kEpsilon, alt.output[i], i == 0 ? weight : 0.0, next});
        prev = next;
      }
    }
  }
  fst.SortArcsByInput();
  return fst;
}

Fst BuildLexiconFst(const Lexicon &lexicon, const PhoneInventory &inventory,
                    SymbolTablePtr words, LexiconDirection direction,
                    const LexiconFstOptions &opts) {
  if (lexicon.empty()) throw Error(ErrorKind::kContract, "lexicon is empty");
  const bool to_words = direction == LexiconDirection::kPhonesToWords;
  Fst fst(to_words ? inventory.symbols() : words, to_words ? words : inventory.symbols());
  StateId start = fst.AddState();
  fst.SetStart(start);
  fst.SetFinal(start, 0.0);
  for (const auto &[word, prons] : lexicon.entries()) {
    Label word_label = words->LabelOf(word);
    Weight weight = opts.weight_by_pronunciations
                        ? std::log(static_cast<double>(prons.size()))
                        : 0.0;
    for (const auto &pron : prons) {
      StateId prev = start;
      for (size_t i = 0; i < pron.size(); ++i) {
        bool last = i + 1 == pron.size();
        StateId next = last ? start : fst.AddState();
        Label phone = pron[i];
        Label word_side = i == 0 ? word_label : kEpsilon;
        Weight w = i == 0 ? weight : 0.0;
        if (to_words)
          fst.AddArc(prev, {phone, word_side, w, next});
        else
          fst.AddArc(prev, {word_side, phone, w, next});
        prev = next;
      }
    }
  }
  fst.SortArcsByInput();
  return fst;
}

}  // namespace phonsim
