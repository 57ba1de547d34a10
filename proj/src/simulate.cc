// src/simulate.cc

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

#include "phonsim/simulate.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "phonsim/builders.h"
#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

namespace {

// Counts decoded strings in order of first appearance.
class StringTally {
 public:
  void Add(WordSeq words, double score) {
    std::string key = Join(words);
    auto [it, inserted] = index_.try_emplace(key, entries_.size());
    if (inserted) {
      entries_.push_back({std::move(words), score, 1});
    } else {
      auto &entry = entries_[it->second];
      entry.freq += 1;
      entry.score = std::min(entry.score, score);
    }
  }

  size_t size() const { return entries_.size(); }

  // Frequency descending; then by `by_score` ascending score; then first
  // appearance.
  std::vector<NBestEntry> Ranked(size_t k, bool by_score) const {
    std::vector<NBestEntry> ranked = entries_;
    std::stable_sort(ranked.begin(), ranked.end(), [by_score](const auto &a, const auto &b) {
      if (a.freq != b.freq) return a.freq > b.freq;
      if (by_score && a.score != b.score) return a.score < b.score;
      return false;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
  }

 private:
  std::vector<NBestEntry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

void RequireVocabulary(const WordSeq &words, const Lexicon &lexicon) {
  for (const auto &word : words) lexicon.Pronunciations(word);
}

// Adds one position's options between `from` and `to`.
void AddOptions(Fst *fst, StateId from, StateId to, std::span<const SampledOption> options) {
  for (const auto &option : options) {
    Weight weight = -std::log(option.weight);
    if (option.output.empty()) {
      fst->AddArc(from, {kEpsilon, kEpsilon, weight, to});
      continue;
    }
    StateId prev = from;
    for (size_t i = 0; i < option.output.size(); ++i) {
      bool last = i + 1 == option.output.size();
      StateId next = last ? to : fst->AddState();
      Label phone = option.output[i];
      fst->AddArc(prev, {phone, phone, i == 0 ? weight : 0.0, next});
      prev = next;
    }
  }
}

}  // namespace

DecodingContext::DecodingContext(const PhoneInventory &inventory, const Lexicon &lexicon,
                                 const ArpaModel &lm, const Options &opts)
    : inventory_(&inventory),
      lexicon_(&lexicon),
      words_(lexicon.WordSymbols()),
      words_to_phones_(BuildLexiconFst(lexicon, inventory, words_,
                                       LexiconDirection::kWordsToPhones, opts.lexicon)),
      lm_(BuildLmFst(lm, words_)),
      decode_graph_(Compose(BuildLexiconFst(lexicon, inventory, words_,
                                            LexiconDirection::kPhonesToWords, opts.lexicon),
                            lm_)),
      eos_decode_graph_(inventory.symbols(), words_) {
  decode_graph_.SortArcsByInput();
  eos_decode_graph_ = EosAugment(decode_graph_, opts.eos_cost);
}

WordSeq DecodingContext::ToWords(std::span<const Label> labels) const {
  WordSeq words;
  words.reserve(labels.size());
  for (Label label : labels) words.push_back(words_->SymbolOf(label));
  return words;
}

NBestList DirectDecode(const WordSeq &words, const DecodingContext &ctx,
                       const Fst &confusion_fst, size_t n, const NBestOptions &search) {
  RequireVocabulary(words, ctx.lexicon());
  Fst chain = LinearChainFst(std::span<const std::string>(words), ctx.words());
  Fst phones = Compose(chain, ctx.words_to_phones());
  Fst confused = Compose(phones, confusion_fst);
  Fst decoded = Compose(confused, ctx.decode_graph());
  NBestList list;
  for (auto &best : NBestUniqueStrings(decoded, n, search))
    list.entries.push_back({ctx.ToWords(best.labels), best.weight, 0});
  list.empty_composition = list.entries.empty();
  return list;
}

std::vector<SampledOption> SampleAlternatives(std::span<const Alternative> row, Rng &rng) {
  if (row.empty()) throw Error(ErrorKind::kContract, "cannot sample from an empty row");
  std::vector<double> probs;
  probs.reserve(row.size());
  for (const auto &alt : row) probs.push_back(alt.prob);
  std::vector<SampledOption> options;
  for (const auto &[index, weight] : SampleRankReweighted(probs, 2, rng))
    options.push_back({row[index].output, weight});
  return options;
}

Fst ChainOptionsFst(std::span<const std::vector<SampledOption>> positions,
                    SymbolTablePtr phones) {
  Fst fst(phones, phones);
  StateId prev = fst.AddState();
  fst.SetStart(prev);
  for (const auto &options : positions) {
    StateId next = fst.AddState();
    AddOptions(&fst, prev, next, options);
    prev = next;
  }
  fst.SetFinal(prev, 0.0);
  return fst;
}

SampledLattice BuildSampledLattice(std::span<const Label> phones, const ConfusionMatrix &cm,
                                   const PhoneInventory &inventory, Rng &rng) {
  SampledLattice lattice{Fst(inventory.symbols(), inventory.symbols()), {}};
  for (Label phone : phones) {
    auto options = SampleAlternatives(cm.Row(phone), rng);
    double total = 0.0;
    for (const auto &option : options) total += option.weight;
    if (std::fabs(total - 1.0) > 1e-9)
      throw Error(ErrorKind::kContract, "sampled position weights sum to " + std::to_string(total));
    lattice.positions.push_back(std::move(options));
  }
  lattice.fst = ChainOptionsFst(lattice.positions, inventory.symbols());
  return lattice;
}

NBestList SampledDecode(const WordSeq &words, const DecodingContext &ctx,
                        const ConfusionMatrix &cm, const SampledDecodeOptions &opts, Rng &rng) {
  if (opts.iterations == 0) throw Error(ErrorKind::kContract, "iterations must be at least 1");
  RequireVocabulary(words, ctx.lexicon());
  StringTally tally;
  NBestList list;
  for (size_t it = 0; it < opts.iterations; ++it) {
    PhoneSeq phones = WordsToPhones(words, ctx.lexicon(), opts.policy, &rng);
    SampledLattice lattice = BuildSampledLattice(phones, cm, ctx.inventory(), rng);
    Fst decoded = Compose(lattice.fst, ctx.decode_graph());
    auto best = NBestUniqueStrings(decoded, 1);
    ++list.iterations;
    if (best.empty()) {
      ++list.skipped_iterations;
      continue;
    }
    tally.Add(ctx.ToWords(best[0].labels), best[0].weight);
  }
  list.entries = tally.Ranked(opts.k, /*by_score=*/false);
  list.empty_composition = list.entries.empty();
  return list;
}

void ValidateStepDistributions(const StepDistributions &dists, double tolerance) {
  if (dists.steps.empty())
    throw Error(ErrorKind::kContract, "utterance '" + dists.id + "' has no timesteps");
  for (size_t t = 0; t < dists.steps.size(); ++t) {
    double total = 0.0;
    for (const auto &[label, p] : dists.steps[t]) {
      if (p < 0.0) throw Error(ErrorKind::kContract, "negative probability");
      total += p;
    }
    if (std::fabs(total - 1.0) > tolerance)
      throw Error(ErrorKind::kContract, "utterance '" + dists.id + "' step " +
                                            std::to_string(t) + " sums to " +
                                            std::to_string(total));
  }
}

std::vector<std::pair<Label, double>> TemperatureTopK(
    std::span<const std::pair<Label, double>> step, const LatticeOptions &opts) {
  if (opts.top_k == 0) throw Error(ErrorKind::kContract, "top_k must be at least 1");
  if (!(opts.tau > 0.0)) throw Error(ErrorKind::kContract, "tau must be positive");
  // (label, q) with q the log score.
  std::vector<std::pair<Label, double>> scored;
  for (const auto &[label, value] : step) {
    double q = opts.scores_are_logs ? value : (value > 0.0 ? std::log(value) : -kInfinity);
    if (q == -kInfinity) continue;
    scored.emplace_back(label, q);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.empty()) return {};
  // Softmax with the max subtracted for stability.
  const double q_max = scored.front().second;
  const size_t kept = std::min(opts.top_k, scored.size());
  const size_t normalized_over = opts.scope == SoftmaxScope::kAll ? scored.size() : kept;
  double denom = 0.0;
  for (size_t i = 0; i < normalized_over; ++i)
    denom += std::exp((scored[i].second - q_max) / opts.tau);
  std::vector<std::pair<Label, double>> result;
  for (size_t i = 0; i < kept; ++i)
    result.emplace_back(scored[i].first, std::exp((scored[i].second - q_max) / opts.tau) / denom);
  return result;
}

namespace {

void CheckStepLabel(Label label, const SymbolTable &phones) {
  if (label <= 0 || static_cast<size_t>(label) >= phones.size())
    throw Error(ErrorKind::kSymbol, "step symbol outside the phone table");
}

}  // namespace

Fst DistributionsToFst(const StepDistributions &dists, SymbolTablePtr phones,
                       const LatticeOptions &opts) {
  if (dists.steps.empty())
    throw Error(ErrorKind::kContract, "utterance '" + dists.id + "' has no timesteps");
  Fst fst(phones, phones);
  StateId prev = fst.AddState();
  fst.SetStart(prev);
  for (const auto &step : dists.steps) {
    StateId next = fst.AddState();
    for (const auto &[label, p] : TemperatureTopK(step, opts)) {
      CheckStepLabel(label, *phones);
      fst.AddArc(prev, {label, label, -std::log(p), next});
    }
    prev = next;
  }
  fst.SetFinal(prev, 0.0);
  return fst;
}

Fst SampleDistributionsFst(const StepDistributions &dists, SymbolTablePtr phones,
                           size_t draws, Rng &rng) {
  if (dists.steps.empty())
    throw Error(ErrorKind::kContract, "utterance '" + dists.id + "' has no timesteps");
  Fst fst(phones, phones);
  StateId prev = fst.AddState();
  fst.SetStart(prev);
  std::vector<double> probs;
  for (const auto &step : dists.steps) {
    StateId next = fst.AddState();
    probs.clear();
    for (const auto &entry : step) probs.push_back(entry.second);
    double total = 0.0;
    for (const auto &[index, weight] : SampleRankReweighted(probs, draws, rng)) {
      CheckStepLabel(step[index].first, *phones);
      fst.AddArc(prev, {step[index].first, step[index].first, -std::log(weight), next});
      total += weight;
    }
    if (std::fabs(total - 1.0) > 1e-9)
      throw Error(ErrorKind::kContract, "sampled step weights sum to " + std::to_string(total));
    prev = next;
  }
  fst.SetFinal(prev, 0.0);
  return fst;
}

std::vector<Cue> SampleCues(const CollapsedErrorMatrix &collapsed,
                            std::span<const Label> phones, Rng &rng) {
  std::vector<Cue> cues;
  cues.reserve(phones.size());
  for (Label phone : phones) {
    const CueDistribution &row = collapsed.Row(phone);
    cues.push_back(static_cast<Cue>(rng.Categorical(row)));
  }
  return cues;
}

NBestList Seq2SeqDecode(const std::string &utterance_id, const WordSeq &words,
                        DistributionProvider &provider, const DecodingContext &ctx,
                        const CollapsedErrorMatrix &collapsed, const Seq2SeqOptions &opts,
                        Rng &rng) {
  if (opts.k < opts.per_sample_nbest)
    throw Error(ErrorKind::kContract, "k must be at least the per-sample n-best size");
  RequireVocabulary(words, ctx.lexicon());
  const size_t cap = opts.max_iterations ? opts.max_iterations : 10 * opts.k;
  const Fst &graph = opts.absorb_eos ? ctx.eos_decode_graph() : ctx.decode_graph();
  StringTally tally;
  NBestList list;
  for (size_t it = 0; it < cap && tally.size() < opts.k; ++it) {
    PhoneSeq phones = WordsToPhones(words, ctx.lexicon(), opts.policy, &rng);
    std::vector<Cue> cues = SampleCues(collapsed, phones, rng);
    std::optional<StepDistributions> dists;
    try {
      dists = provider.Next(utterance_id, phones, cues);
    } catch (const std::exception &e) {
      std::string cue_text;
      for (Cue cue : cues) cue_text += std::string(cue_text.empty() ? "" : " ") + CueName(cue);
      throw Error(ErrorKind::kProvider, std::string("distribution provider failed for '") +
                                            utterance_id + "' with cues [" + cue_text +
                                            "]: " + e.what());
    }
    if (!dists) break;
    Fst lattice = opts.mode == Seq2SeqMode::kDirect
                      ? DistributionsToFst(*dists, ctx.inventory().symbols(), opts.lattice)
                      : SampleDistributionsFst(*dists, ctx.inventory().symbols(),
                                               opts.sampled_draws, rng);
    Fst decoded = Compose(lattice, graph);
    auto best = NBestUniqueStrings(decoded, opts.per_sample_nbest);
    ++list.iterations;
    if (best.empty()) {
      ++list.skipped_iterations;
      continue;
    }
    for (auto &entry : best) tally.Add(ctx.ToWords(entry.labels), entry.weight);
  }
  list.entries = tally.Ranked(opts.k, /*by_score=*/true);
  list.empty_composition = list.entries.empty();
  return list;
}

NBestList MergeKBest(const NBestList &a, const NBestList &b, size_t k) {
  if (k % 2 != 0) throw Error(ErrorKind::kContract, "merge size k must be even");
  NBestList merged;
  std::unordered_map<std::string, bool> seen;
  auto take = [&](const NBestEntry &entry) {
    if (merged.entries.size() >= k) return;
    if (seen.try_emplace(Join(entry.words), true).second) merged.entries.push_back(entry);
  };
  const size_t half = k / 2;
  const size_t a_head = std::min(half, a.entries.size());
  const size_t b_head = std::min(half, b.entries.size());
  for (size_t i = 0; i < a_head; ++i) take(a.entries[i]);
  for (size_t i = 0; i < b_head; ++i) take(b.entries[i]);
  size_t ia = a_head, ib = b_head;
  while (merged.entries.size() < k && (ia < a.entries.size() || ib < b.entries.size())) {
    if (ia < a.entries.size()) take(a.entries[ia++]);
    if (ib < b.entries.size()) take(b.entries[ib++]);
  }
  merged.empty_composition = merged.entries.empty();
  return merged;
}

}  // namespace phonsim
