// src/corpus.cc

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

#include "phonsim/corpus.h"

#include <fstream>
#include <ostream>
#include <unordered_set>

#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

void Lexicon::Add(const std::string &word, PhoneSeq pronunciation) {
  if (word.empty()) throw Error(ErrorKind::kContract, "empty lexicon word");
  if (pronunciation.empty())
    throw Error(ErrorKind::kContract, "empty pronunciation for '" + word + "'");
  entries_[word].push_back(std::move(pronunciation));
}

const std::vector<PhoneSeq> &Lexicon::Pronunciations(const std::string &word) const {
  auto it = entries_.find(word);
  if (it == entries_.end())
    throw Error(ErrorKind::kMissingWord, "word '" + word + "' not in lexicon");
  return it->second;
}

SymbolTablePtr Lexicon::WordSymbols() const {
  auto table = std::make_shared<SymbolTable>();
  for (const auto &[word, prons] : entries_) table->AddSymbol(word);
  return table;
}

void Lexicon::Write(std::ostream &os, const PhoneInventory &inventory) const {
  for (const auto &[word, prons] : entries_)
    for (const auto &pron : prons) os << word << ' ' << inventory.Format(pron) << '\n';
}

Lexicon ParseLexicon(std::istream &is, const std::string &source,
                     const PhoneInventory &inventory, const LexiconOptions &opts) {
  Lexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2)
      throw ParseError(source, line_no, "expected 'WORD phone ...'");
    std::string word = tokens[0];
    if (opts.lowercase_words) {
      auto normalized = NormalizeWords(word, true);
      if (normalized.size() != 1)
        throw ParseError(source, line_no, "word '" + word + "' does not normalize to one token");
      word = normalized[0];
    }
    PhoneSeq pron;
    for (size_t i = 1; i < tokens.size(); ++i) {
      try {
        pron.push_back(inventory.PhoneLabel(tokens[i]));
      } catch (const Error &e) {
        throw Error(ErrorKind::kInventory,
                    source + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    lexicon.Add(word, std::move(pron));
  }
  return lexicon;
}

Lexicon LoadLexicon(const std::string &path, const PhoneInventory &inventory,
                    const LexiconOptions &opts) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open lexicon " + path);
  return ParseLexicon(is, path, inventory, opts);
}

PhoneSeq WordsToPhones(const WordSeq &words, const Lexicon &lexicon,
                       PronunciationPolicy policy, Rng *rng) {
  if (policy == PronunciationPolicy::kSample && rng == nullptr)
    throw Error(ErrorKind::kContract, "sampled pronunciations need a generator");
  PhoneSeq phones;
  for (const auto &word : words) {
    const auto &prons = lexicon.Pronunciations(word);
    size_t choice = 0;
    if (policy == PronunciationPolicy::kSample) choice = rng->UniformIndex(prons.size());
    const auto &pron = prons[choice];
    phones.insert(phones.end(), pron.begin(), pron.end());
  }
  return phones;
}

namespace {

std::string StripCarriageReturn(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

ParallelCorpus ParseParallelCorpus(std::istream &is, const std::string &source,
                                   const CorpusOptions &opts) {
  ParallelCorpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = StripCarriageReturn(std::move(line));
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 3)
      throw ParseError(source, line_no,
                       "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    if (fields[0].empty()) throw ParseError(source, line_no, "empty utterance id");
    if (!seen.insert(fields[0]).second)
      throw Error(ErrorKind::kDuplicate, source + ":" + std::to_string(line_no) +
                                             ": duplicate utterance id '" + fields[0] + "'");
    ParallelItem item{fields[0], NormalizeWords(fields[1], opts.lowercase),
                      NormalizeWords(fields[2], opts.lowercase)};
    if (item.gold.empty())
      throw ParseError(source, line_no, "gold text is empty");
    corpus.items.push_back(std::move(item));
  }
  return corpus;
}

ParallelCorpus LoadParallelCorpus(const std::string &path, const CorpusOptions &opts) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open corpus " + path);
  return ParseParallelCorpus(is, path, opts);
}

std::vector<TextItem> ParseTextItems(std::istream &is, const std::string &source,
                                     const CorpusOptions &opts) {
  std::vector<TextItem> items;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = StripCarriageReturn(std::move(line));
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 && fields.size() != 3)
      throw ParseError(source, line_no, "expected 'id<TAB>text'");
    if (!seen.insert(fields[0]).second)
      throw Error(ErrorKind::kDuplicate, source + ":" + std::to_string(line_no) +
                                             ": duplicate utterance id '" + fields[0] + "'");
    items.push_back({fields[0], NormalizeWords(fields[1], opts.lowercase)});
  }
  return items;
}

std::vector<TextItem> LoadTextItems(const std::string &path, const CorpusOptions &opts) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open input " + path);
  return ParseTextItems(is, path, opts);
}

}  // namespace phonsim
