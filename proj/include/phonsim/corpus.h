// include/phonsim/corpus.h

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

#ifndef PHONSIM_CORPUS_H_
#define PHONSIM_CORPUS_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phonsim/inventory.h"
#include "phonsim/random.h"
#include "phonsim/symbol_table.h"

namespace phonsim {

using WordSeq = std::vector<std::string>;

/// Word -> ordered list of pronunciations.
class Lexicon {
 public:
  // Appends a pronunciation; throws kContract on an empty one.
  void Add(const std::string &word, PhoneSeq pronunciation);

  bool Contains(const std::string &word) const { return entries_.count(word) > 0; }
  // Throws kMissingWord naming the word.
  const std::vector<PhoneSeq> &Pronunciations(const std::string &word) const;
  const std::map<std::string, std::vector<PhoneSeq>> &entries() const { return entries_; }
  size_t NumWords() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Epsilon plus every word in sorted order.
  SymbolTablePtr WordSymbols() const;

  // One "WORD phone phone ..." line per pronunciation.
  void Write(std::ostream &os, const PhoneInventory &inventory) const;

  bool operator==(const Lexicon &other) const { return entries_ == other.entries_; }

 private:
  std::map<std::string, std::vector<PhoneSeq>> entries_;
};

struct LexiconOptions {
  bool lowercase_words = false;
};

Lexicon LoadLexicon(const std::string &path, const PhoneInventory &inventory,
                    const LexiconOptions &opts = {});
Lexicon ParseLexicon(std::istream &is, const std::string &source,
                     const PhoneInventory &inventory,
                     const LexiconOptions &opts = {});

enum class PronunciationPolicy { kFirst, kSample };

// Concatenates one pronunciation per word. kSample draws uniformly from
// `rng`, which must then be non-null.
PhoneSeq WordsToPhones(const WordSeq &words, const Lexicon &lexicon,
                       PronunciationPolicy policy = PronunciationPolicy::kFirst,
                       Rng *rng = nullptr);

struct ParallelItem {
  std::string id;
  WordSeq gold;
  WordSeq recognized;  // may be empty (everything deleted)
};

struct ParallelCorpus {
  std::vector<ParallelItem> items;
};

struct CorpusOptions {
  bool lowercase = true;
};

// "id<TAB>gold<TAB>recognized" per line.
ParallelCorpus LoadParallelCorpus(const std::string &path,
                                  const CorpusOptions &opts = {});
ParallelCorpus ParseParallelCorpus(std::istream &is, const std::string &source,
                                   const CorpusOptions &opts = {});

struct TextItem {
  std::string id;
  WordSeq words;
};

// Input for simulation: "id<TAB>text", or a parallel corpus line whose gold
// field is used.
std::vector<TextItem> LoadTextItems(const std::string &path,
                                    const CorpusOptions &opts = {});
std::vector<TextItem> ParseTextItems(std::istream &is, const std::string &source,
                                     const CorpusOptions &opts = {});

}  // namespace phonsim

#endif  // PHONSIM_CORPUS_H_
