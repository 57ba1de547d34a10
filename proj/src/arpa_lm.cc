// src/arpa_lm.cc

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

#include "phonsim/arpa_lm.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <numbers>

#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

namespace {

Weight FromLog10(double log10_value) { return -log10_value * std::numbers::ln10; }

double ParseDouble(const std::string &text, const std::string &source, size_t line_no) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ParseError(source, line_no, "bad number '" + text + "'");
  return value;
}

}  // namespace

std::vector<std::string> ArpaModel::Vocabulary() const {
  std::vector<std::string> vocab;
  for (const auto &[words, entry] : ngrams)
    if (words.size() == 1 && words[0] != kSentenceStart && words[0] != kSentenceEnd)
      vocab.push_back(words[0]);
  return vocab;
}

ArpaModel ParseArpa(std::istream &is, const std::string &source) {
  ArpaModel model;
  std::map<int, size_t> declared;
  std::map<int, size_t> seen;
  enum class Section { kPreamble, kData, kNgrams, kEnd } section = Section::kPreamble;
  int current = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "\\data\\") {
      section = Section::kData;
      continue;
    }
    if (tokens[0] == "\\end\\") {
      section = Section::kEnd;
      break;
    }
    if (tokens[0].size() > 8 && tokens[0].front() == '\\' &&
        tokens[0].ends_with("-grams:")) {
      if (section == Section::kPreamble)
        throw ParseError(source, line_no, "n-gram section before \\data\\");
      std::string digits = tokens[0].substr(1, tokens[0].size() - 8);
      current = static_cast<int>(ParseDouble(digits, source, line_no));
      if (!declared.count(current))
        throw ParseError(source, line_no, "section for undeclared order " + digits);
      section = Section::kNgrams;
      continue;
    }
    switch (section) {
      case Section::kPreamble:
        continue;
      case Section::kData: {
        if (tokens[0] != "ngram" || tokens.size() != 2)
          throw ParseError(source, line_no, "expected 'ngram N=count'");
        auto eq = tokens[1].find('=');
        if (eq == std::string::npos)
          throw ParseError(source, line_no, "expected 'ngram N=count'");
        int order = static_cast<int>(ParseDouble(tokens[1].substr(0, eq), source, line_no));
        auto count = static_cast<size_t>(ParseDouble(tokens[1].substr(eq + 1), source, line_no));
        if (order < 1 || order > 3)
          throw ParseError(source, line_no, "only orders 1-3 are supported");
        declared[order] = count;
        model.order = std::max(model.order, order);
        break;
      }
      case Section::kNgrams: {
        const size_t n = static_cast<size_t>(current);
        if (tokens.size() != n + 1 && tokens.size() != n + 2)
          throw ParseError(source, line_no, "expected " + std::to_string(n) + " words");
        NgramEntry entry;
        entry.log10_prob = ParseDouble(tokens[0], source, line_no);
        if (tokens.size() == n + 2)
          entry.log10_backoff = ParseDouble(tokens[n + 1], source, line_no);
        std::vector<std::string> words(tokens.begin() + 1, tokens.begin() + 1 + n);
        model.ngrams[std::move(words)] = entry;
        ++seen[current];
        break;
      }
      case Section::kEnd:
        break;
    }
  }
  if (section != Section::kEnd) throw ParseError(source, line_no, "missing \\end\\");
  if (model.order == 0) throw ParseError(source, line_no, "no n-gram counts declared");
  for (const auto &[order, count] : declared)
    if (seen[order] != count)
      throw ParseError(source, line_no, "order " + std::to_string(order) + " declares " +
                                            std::to_string(count) + " entries, found " +
                                            std::to_string(seen[order]));
  return model;
}

ArpaModel LoadArpa(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open language model " + path);
  return ParseArpa(is, path);
}

void WriteArpa(std::ostream &os, const ArpaModel &model) {
  std::map<size_t, std::vector<const std::pair<const std::vector<std::string>, NgramEntry> *>>
      by_order;
  for (const auto &entry : model.ngrams) by_order[entry.first.size()].push_back(&entry);
  auto flags = os.flags();
  auto precision = os.precision();
  os << std::setprecision(10);
  os << "\\data\\\n";
  for (int order = 1; order <= model.order; ++order)
    os << "ngram " << order << '=' << by_order[order].size() << '\n';
  for (int order = 1; order <= model.order; ++order) {
    os << "\n\\" << order << "-grams:\n";
    for (const auto *entry : by_order[order]) {
      os << entry->second.log10_prob;
      for (const auto &word : entry->first) os << ' ' << word;
      if (order < model.order && entry->second.log10_backoff != 0.0)
        os << ' ' << entry->second.log10_backoff;
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
  os.flags(flags);
  os.precision(precision);
}

Fst BuildLmFst(const ArpaModel &model, SymbolTablePtr words) {
  if (!words) {
    auto table = std::make_shared<SymbolTable>();
    for (const auto &word : model.Vocabulary()) table->AddSymbol(word);
    words = std::move(table);
  }
  using History = std::vector<std::string>;
  auto usable = [&](const History &h) {
    for (const auto &w : h)
      if (w != kSentenceStart && w != kSentenceEnd && !words->Contains(w)) return false;
    return true;
  };

  Fst fst(words, words);
  std::map<History, StateId> states;
  states[{}] = fst.AddState();
  for (const auto &[h, entry] : model.ngrams) {
    if (static_cast<int>(h.size()) >= model.order) continue;
    if (h.back() == kSentenceEnd || !usable(h)) continue;
    states.emplace(h, fst.AddState());
  }

  // Longest suffix of `h` that has a state.
  auto backoff_state = [&](History h) {
    while (!states.count(h)) h.erase(h.begin());
    return states.at(h);
  };

  // -ln p(</s> | h) through the backoff chain.
  std::map<History, Weight> end_cache;
  auto end_weight = [&](auto &&self, const History &h) -> Weight {
    if (auto it = end_cache.find(h); it != end_cache.end()) return it->second;
    History with_end = h;
    with_end.push_back(kSentenceEnd);
    Weight w = kInfinity;
    if (auto it = model.ngrams.find(with_end); it != model.ngrams.end()) {
      w = FromLog10(it->second.log10_prob);
    } else if (!h.empty()) {
      double bo = 0.0;
      if (auto hb = model.ngrams.find(h); hb != model.ngrams.end()) bo = hb->second.log10_backoff;
      w = FromLog10(bo) + self(self, History(h.begin() + 1, h.end()));
    }
    end_cache[h] = w;
    return w;
  };

  // Models without </s> leave sentence ends unscored.
  const bool models_end = model.ngrams.count({kSentenceEnd}) > 0;
  for (const auto &[h, s] : states) {
    Weight final_weight = models_end ? end_weight(end_weight, h) : 0.0;
    if (final_weight != kInfinity) fst.SetFinal(s, final_weight);
    if (!h.empty()) {
      const auto &entry = model.ngrams.at(h);
      fst.AddArc(s, {kEpsilon, kEpsilon, FromLog10(entry.log10_backoff),
                     backoff_state(History(h.begin() + 1, h.end()))});
    }
  }

  for (const auto &[ngram, entry] : model.ngrams) {
    const std::string &word = ngram.back();
    if (word == kSentenceStart || word == kSentenceEnd || !usable(ngram)) continue;
    History h(ngram.begin(), ngram.end() - 1);
    auto from = states.find(h);
    if (from == states.end()) continue;
    History next = ngram;
    if (static_cast<int>(next.size()) >= model.order) next.erase(next.begin());
    fst.AddArc(from->second, {words->LabelOf(word), words->LabelOf(word),
                              FromLog10(entry.log10_prob), backoff_state(next)});
  }

  History start_history{kSentenceStart};
  fst.SetStart(states.count(start_history) ? states.at(start_history) : states.at({}));
  fst.SortArcsByInput();
  return fst;
}

Fst BuildLmFst(const std::string &arpa_path, SymbolTablePtr words) {
  return BuildLmFst(LoadArpa(arpa_path), std::move(words));
}

}  // namespace phonsim
