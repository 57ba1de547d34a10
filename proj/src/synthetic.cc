// src/synthetic.cc

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

#include "phonsim/synthetic.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "phonsim/error.h"
#include "phonsim/simulate.h"

namespace phonsim {

namespace {

// `count` nearest other phones by feature distance; ties by label.
std::vector<Label> NearestPhones(const PhoneInventory &inventory, Label phone, size_t count) {
  std::vector<Label> others;
  for (Label p : inventory.Phones())
    if (p != phone) others.push_back(p);
  std::stable_sort(others.begin(), others.end(), [&](Label a, Label b) {
    return inventory.Distance(phone, a) < inventory.Distance(phone, b);
  });
  others.resize(std::min(count, others.size()));
  return others;
}

bool IsVowel(const PhoneInventory &inventory, Label phone) {
  return inventory.Features(phone)[0] == 0;
}

ConfusionMatrix TruthChannel(const PhoneInventory &inventory, const SyntheticOptions &opts,
                             Rng &rng) {
  const double e = opts.phone_error_rate;
  std::map<Label, std::vector<std::pair<PhoneSeq, double>>> rows;
  for (Label p : inventory.Phones()) {
    auto near = NearestPhones(inventory, p, opts.competitors);
    auto &row = rows[p];
    row.emplace_back(PhoneSeq{p}, 1.0 - e);
    // Substitution mass decays over the competitors: 1/2, 1/4, ...
    double share = 0.5, assigned = 0.0;
    for (size_t i = 0; i < near.size(); ++i) {
      double w = (i + 1 == near.size()) ? 1.0 - assigned : share;
      row.emplace_back(PhoneSeq{near[i]}, 0.75 * e * w);
      assigned += w;
      share /= 2.0;
    }
    row.emplace_back(PhoneSeq{}, 0.15 * e);
    row.emplace_back(PhoneSeq{p, near[rng.UniformIndex(near.size())]}, 0.10 * e);
  }
  return ConfusionMatrix::FromProbabilities(rows, inventory);
}

PhoneSeq RandomPronunciation(const PhoneInventory &inventory, Rng &rng) {
  static const char *kTemplates[] = {"CVC", "CVCV", "CCVC", "VCVC", "CVCC", "CVCVC"};
  std::vector<Label> vowels, consonants;
  for (Label p : inventory.Phones()) (IsVowel(inventory, p) ? vowels : consonants).push_back(p);
  const std::string shape = kTemplates[rng.UniformIndex(std::size(kTemplates))];
  PhoneSeq pron;
  for (char c : shape) {
    const auto &pool = c == 'V' ? vowels : consonants;
    pron.push_back(pool[rng.UniformIndex(pool.size())]);
  }
  return pron;
}

std::string Spell(const PhoneInventory &inventory, const PhoneSeq &pron) {
  std::string word;
  for (Label p : pron) word += inventory.Name(p);
  return word;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(const PhoneInventory &inventory,
                                        const SyntheticOptions &opts) {
  if (opts.min_sentence_words == 0 || opts.max_sentence_words < opts.min_sentence_words)
    throw Error(ErrorKind::kContract, "bad sentence length range");
  Rng rng(opts.seed);
  SyntheticCorpus data;
  data.truth = TruthChannel(inventory, opts, rng);

  std::set<PhoneSeq> used;
  std::set<std::string> spellings;
  std::vector<std::string> vocabulary;
  auto add_word = [&](const PhoneSeq &pron) {
    if (!used.insert(pron).second) return false;
    std::string word = Spell(inventory, pron);
    for (int suffix = 2; !spellings.insert(word).second; ++suffix)
      word = Spell(inventory, pron) + std::to_string(suffix);
    data.lexicon.Add(word, pron);
    vocabulary.push_back(word);
    return true;
  };
  for (size_t b = 0; b < opts.base_words; ++b) {
    PhoneSeq base;
    do base = RandomPronunciation(inventory, rng);
    while (!add_word(base));
    // Single substitutions first; once those run dry, more positions
    // change per variant so every base gets its full set.
    for (size_t v = 0, attempts = 0; v < opts.variants_per_base && attempts < 1000; ++attempts) {
      PhoneSeq variant = base;
      size_t edits = std::min(base.size(), 1 + attempts / 40);
      for (size_t e = 0; e < edits; ++e) {
        size_t pos = rng.UniformIndex(variant.size());
        auto near = NearestPhones(inventory, base[pos], opts.competitors);
        variant[pos] = near[rng.UniformIndex(near.size())];
      }
      if (add_word(variant)) ++v;
    }
  }

  // Zipfian unigram over a shuffled rank order.
  std::vector<size_t> rank(vocabulary.size());
  for (size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  for (size_t i = rank.size(); i > 1; --i) std::swap(rank[i - 1], rank[rng.UniformIndex(i)]);
  std::vector<double> word_probs(vocabulary.size());
  double mass = 0.0;
  for (size_t i = 0; i < vocabulary.size(); ++i) {
    word_probs[i] = std::pow(static_cast<double>(rank[i] + 1), -opts.zipf_exponent);
    mass += word_probs[i];
  }
  for (auto &p : word_probs) p *= (1.0 - opts.end_probability) / mass;
  data.lm.order = 1;
  for (size_t i = 0; i < vocabulary.size(); ++i)
    data.lm.ngrams[{vocabulary[i]}] = {std::log10(word_probs[i]), 0.0};
  data.lm.ngrams[{kSentenceEnd}] = {std::log10(opts.end_probability), 0.0};
  data.lm.ngrams[{kSentenceStart}] = {-99.0, 0.0};

  DecodingContext ctx(inventory, data.lexicon, data.lm);
  for (size_t s = 0; s < opts.sentences; ++s) {
    size_t span = opts.max_sentence_words - opts.min_sentence_words + 1;
    size_t length = opts.min_sentence_words + rng.UniformIndex(span);
    WordSeq gold;
    for (size_t w = 0; w < length; ++w) gold.push_back(vocabulary[rng.Categorical(word_probs)]);

    PhoneSeq phones = WordsToPhones(gold, data.lexicon);
    std::vector<std::vector<SampledOption>> posterior;
    for (Label phone : phones) {
      const auto &row = data.truth.Row(phone);
      std::vector<double> probs;
      for (const auto &alt : row) probs.push_back(alt.prob);
      size_t outcome = rng.Categorical(probs);
      // Runner-up: the identity when the outcome is an error, otherwise a
      // competing alternative drawn from the rest of the row.
      probs[outcome] = 0.0;
      size_t runner_up = outcome;
      for (size_t i = 0; i < row.size(); ++i)
        if (row[i].output == PhoneSeq{phone} && i != outcome) runner_up = i;
      if (runner_up == outcome && row.size() > 1) runner_up = rng.Categorical(probs);
      std::vector<SampledOption> options{{row[outcome].output, opts.peak}};
      if (runner_up != outcome) options.push_back({row[runner_up].output, 1.0 - opts.peak});
      else options[0].weight = 1.0;
      posterior.push_back(std::move(options));
    }
    Fst lattice = ChainOptionsFst(posterior, inventory.symbols());
    auto best = NBestUniqueStrings(Compose(lattice, ctx.decode_graph()), 1);
    WordSeq hyp = best.empty() ? gold : ctx.ToWords(best[0].labels);
    data.corpus.items.push_back({"utt" + std::to_string(1000 + s), std::move(gold), std::move(hyp)});
  }
  return data;
}

void WriteSyntheticCorpus(const std::string &dir, const SyntheticCorpus &data,
                          const PhoneInventory &inventory) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string &name) {
    std::ofstream os(dir + "/" + name);
    if (!os) throw Error(ErrorKind::kIo, "cannot write " + dir + "/" + name);
    return os;
  };
  {
    auto os = open("lexicon.txt");
    data.lexicon.Write(os, inventory);
  }
  {
    auto os = open("lm.arpa");
    WriteArpa(os, data.lm);
  }
  {
    auto os = open("truth.confmat");
    data.truth.Write(os, inventory);
  }
  auto os = open("corpus.tsv");
  for (const auto &item : data.corpus.items) {
    os << item.id << '\t';
    for (size_t i = 0; i < item.gold.size(); ++i) os << (i ? " " : "") << item.gold[i];
    os << '\t';
    for (size_t i = 0; i < item.recognized.size(); ++i) os << (i ? " " : "") << item.recognized[i];
    os << '\n';
  }
}

}  // namespace phonsim
