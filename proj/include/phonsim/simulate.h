// include/phonsim/simulate.h

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

#ifndef PHONSIM_SIMULATE_H_
#define PHONSIM_SIMULATE_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phonsim/arpa_lm.h"
#include "phonsim/builders.h"
#include "phonsim/confusion_matrix.h"
#include "phonsim/corpus.h"
#include "phonsim/fst.h"
#include "phonsim/fst_ops.h"
#include "phonsim/random.h"

namespace phonsim {

struct NBestEntry {
  WordSeq words;
  double score = 0.0;  // best path weight seen for this string
  size_t freq = 0;     // times produced by sampling; 0 for pure n-best
};

// Ranked, duplicate-free alternatives for one utterance.
struct NBestList {
  std::vector<NBestEntry> entries;
  // Set when no path survived composition.
  bool empty_composition = false;
  // Sampling iterations whose lattice had no path through the decode graph.
  size_t skipped_iterations = 0;
  size_t iterations = 0;
};

/// Machines shared by every decoding strategy: the inverted lexicon and
/// the lexicon-LM decoding graph (plus its <eos>-absorbing variant).
/// Immutable after construction and safe to share between threads.
class DecodingContext {
 public:
  struct Options {
    LexiconFstOptions lexicon;
    Weight eos_cost = 0.1;
  };

  DecodingContext(const PhoneInventory &inventory, const Lexicon &lexicon,
                  const ArpaModel &lm, const Options &opts);
  DecodingContext(const PhoneInventory &inventory, const Lexicon &lexicon,
                  const ArpaModel &lm)
      : DecodingContext(inventory, lexicon, lm, Options{}) {}

  const PhoneInventory &inventory() const { return *inventory_; }
  const Lexicon &lexicon() const { return *lexicon_; }
  const SymbolTablePtr &words() const { return words_; }
  const Fst &words_to_phones() const { return words_to_phones_; }
  const Fst &language_model() const { return lm_; }
  // Lexicon composed with the language model: phones in, words out.
  const Fst &decode_graph() const { return decode_graph_; }
  const Fst &eos_decode_graph() const { return eos_decode_graph_; }

  // Word strings for output labels of a decoded path.
  WordSeq ToWords(std::span<const Label> labels) const;

 private:
  const PhoneInventory *inventory_;
  const Lexicon *lexicon_;
  SymbolTablePtr words_;
  Fst words_to_phones_;
  Fst lm_;
  Fst decode_graph_;
  Fst eos_decode_graph_;
};

// n-best unique word strings of W o P^-1 o C o (P o L). `confusion_fst`
// comes from BuildConfusionFst. Throws kMissingWord for out-of-vocabulary
// input words.
NBestList DirectDecode(const WordSeq &words, const DecodingContext &ctx,
                       const Fst &confusion_fst, size_t n,
                       const NBestOptions &search = {});

struct SampledOption {
  PhoneSeq output;
  double weight;  // normalized; options of one position sum to 1
};

// Two alternatives drawn without replacement in proportion to the row;
// the first carries the row's rank-1 probability, the second its rank-2
// probability, renormalized. A single-alternative row yields itself at 1.
std::vector<SampledOption> SampleAlternatives(std::span<const Alternative> row, Rng &rng);

// Phone acceptor with one segment per position; each option of a
// position is a path weighted -ln(option weight) on its first arc, and an
// empty option is an <eps> arc.
Fst ChainOptionsFst(std::span<const std::vector<SampledOption>> positions,
                    SymbolTablePtr phones);

struct SampledLattice {
  Fst fst;
  std::vector<std::vector<SampledOption>> positions;
};

// Chains SampleAlternatives over `phones` into a phone acceptor.
SampledLattice BuildSampledLattice(std::span<const Label> phones, const ConfusionMatrix &cm,
                                   const PhoneInventory &inventory, Rng &rng);

struct SampledDecodeOptions {
  size_t iterations = 1000;
  size_t k = 100;
  PronunciationPolicy policy = PronunciationPolicy::kFirst;
};

// One sampled lattice per iteration, decoded to its 1-best string; strings
// ranked by how often they were produced (ties: first occurrence) and
// truncated to k.
NBestList SampledDecode(const WordSeq &words, const DecodingContext &ctx,
                        const ConfusionMatrix &cm, const SampledDecodeOptions &opts, Rng &rng);

// Per-timestep distributions over phones and <eos>, as emitted by a
// sequence model for one utterance.
struct StepDistributions {
  std::string id;
  std::vector<std::vector<std::pair<Label, double>>> steps;
};

// Throws kContract unless there is at least one step and every step sums
// to 1 within `tolerance`.
void ValidateStepDistributions(const StepDistributions &dists, double tolerance = 1e-6);

enum class SoftmaxScope {
  kSelected,  // temperature softmax over the top-k symbols only
  kAll,       // softmax over every nonzero symbol, keep the top-k unrenormalized
};

struct LatticeOptions {
  size_t top_k = 3;
  double tau = 10.0;
  // Step values are already log scores rather than probabilities.
  bool scores_are_logs = false;
  SoftmaxScope scope = SoftmaxScope::kSelected;
};

// Top-k temperature-softmax probabilities of one step, sorted by
// descending probability (ties by label).
std::vector<std::pair<Label, double>> TemperatureTopK(
    std::span<const std::pair<Label, double>> step, const LatticeOptions &opts);

// Chain acceptor with one parallel arc per selected symbol per step,
// weighted -ln of its temperature-softmax probability.
Fst DistributionsToFst(const StepDistributions &dists, SymbolTablePtr phones,
                       const LatticeOptions &opts = {});

// Sampled counterpart: per step `draws` symbols without replacement,
// reweighted by the step's rank-1..draws probabilities.
Fst SampleDistributionsFst(const StepDistributions &dists, SymbolTablePtr phones,
                           size_t draws, Rng &rng);

// Independent categorical draw per phone from its five-way cue row.
std::vector<Cue> SampleCues(const CollapsedErrorMatrix &collapsed,
                            std::span<const Label> phones, Rng &rng);

/// Source of sequence-model output distributions for (phones, cues).
class DistributionProvider {
 public:
  virtual ~DistributionProvider() = default;
  // std::nullopt when the provider has nothing more for this utterance.
  virtual std::optional<StepDistributions> Next(const std::string &utterance_id,
                                                std::span<const Label> phones,
                                                std::span<const Cue> cues) = 0;
};

enum class Seq2SeqMode { kDirect, kSampled };

struct Seq2SeqOptions {
  size_t k = 100;
  Seq2SeqMode mode = Seq2SeqMode::kDirect;
  size_t per_sample_nbest = 5;
  size_t sampled_draws = 3;
  // 0 selects 10 * k.
  size_t max_iterations = 0;
  bool absorb_eos = true;
  LatticeOptions lattice;
  PronunciationPolicy policy = PronunciationPolicy::kFirst;
};

// Repeats cue sampling, distribution lookup, lattice construction and
// n-best decoding until k distinct strings exist or the iteration cap is
// reached. Ranked by frequency, then best score.
NBestList Seq2SeqDecode(const std::string &utterance_id, const WordSeq &words,
                        DistributionProvider &provider, const DecodingContext &ctx,
                        const CollapsedErrorMatrix &collapsed, const Seq2SeqOptions &opts,
                        Rng &rng);

// First k/2 of each list, deduplicated in order, then backfilled from the
// remaining entries alternating between a and b. k must be even.
NBestList MergeKBest(const NBestList &a, const NBestList &b, size_t k);

}  // namespace phonsim

#endif  // PHONSIM_SIMULATE_H_
