// include/phonsim/confusion_matrix.h

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

#ifndef PHONSIM_CONFUSION_MATRIX_H_
#define PHONSIM_CONFUSION_MATRIX_H_

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phonsim/align.h"
#include "phonsim/inventory.h"

namespace phonsim {

// Error type realized at one reference phone.
enum class Cue { kNoError = 0, kMutation, kDeletion, kInsertOne, kInsertMany };
inline constexpr size_t kNumCues = 5;

const char *CueName(Cue cue);
Cue ParseCue(std::string_view name);
Cue ClassifyAlternative(Label input, std::span<const Label> output);

struct Alternative {
  PhoneSeq output;
  double count = 0.0;
  double prob = 0.0;
};

/// Per-input-phone distribution over output phone sequences.
///
/// Rows are ordered by descending probability, ties broken by the
/// lexicographic order of the output phone names, so rank 1 is always
/// alternatives[0]. Every inventory phone has a row; phones never seen in
/// training map to themselves with probability 1.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;

  const std::vector<Alternative> &Row(Label input) const;
  bool HasRow(Label input) const { return rows_.count(input) > 0; }
  const std::map<Label, std::vector<Alternative>> &rows() const { return rows_; }

  // Row sums within `tolerance` of 1, all probabilities positive, no empty
  // rows. Throws kContract with the offending phone otherwise.
  void Validate(const PhoneInventory &inventory, double tolerance = 1e-9) const;

  // "input<TAB>outputs<TAB>count<TAB>prob" per alternative, rows in label
  // order, alternatives in rank order.
  void Write(std::ostream &os, const PhoneInventory &inventory) const;
  static ConfusionMatrix Read(std::istream &is, const std::string &source,
                              const PhoneInventory &inventory);
  static ConfusionMatrix Load(const std::string &path, const PhoneInventory &inventory);

  // Identity matrix over the whole inventory.
  static ConfusionMatrix Identity(const PhoneInventory &inventory);

  // Counts -> matrix. With add_k > 0 every single-phone output (and the
  // observed alternatives) gets k extra counts per row.
  static ConfusionMatrix FromCounts(
      const std::map<Label, std::map<PhoneSeq, double>> &counts,
      const PhoneInventory &inventory, double add_k = 0.0);

  // Rows supplied directly (probabilities renormalized, zero entries dropped).
  static ConfusionMatrix FromProbabilities(
      const std::map<Label, std::vector<std::pair<PhoneSeq, double>>> &rows,
      const PhoneInventory &inventory);

 private:
  void SortRows(const PhoneInventory &inventory);

  std::map<Label, std::vector<Alternative>> rows_;
};

// Accumulates alternative counts; shards can be merged in any order.
class ConfusionCounter {
 public:
  void Add(const Alignment &alignment);
  void Merge(const ConfusionCounter &other);
  size_t NumAlignments() const { return num_alignments_; }
  const std::map<Label, std::map<PhoneSeq, double>> &counts() const { return counts_; }

 private:
  std::map<Label, std::map<PhoneSeq, double>> counts_;
  size_t num_alignments_ = 0;
};

struct EstimateOptions {
  double add_k = 0.0;
};

// Throws kContract on an empty list.
ConfusionMatrix EstimateConfusionMatrix(std::span<const Alignment> alignments,
                                        const PhoneInventory &inventory,
                                        const EstimateOptions &opts = {});

using CueDistribution = std::array<double, kNumCues>;

// Five-way error-type view of a confusion matrix. Zero-mass cues stay in
// place as structural zeros.
class CollapsedErrorMatrix {
 public:
  const CueDistribution &Row(Label input) const;
  std::map<Label, CueDistribution> &rows() { return rows_; }
  const std::map<Label, CueDistribution> &rows() const { return rows_; }

 private:
  std::map<Label, CueDistribution> rows_;
};

CollapsedErrorMatrix CollapseErrorTypes(const ConfusionMatrix &cm);

// Length-1 alternatives of the row for `input`, renormalized. Empty when
// the row has none.
std::vector<std::pair<Label, double>> ReducedRow(const ConfusionMatrix &cm, Label input);

struct SmoothedTarget {
  std::vector<std::pair<Label, double>> probs;  // sorted by label

  double ProbOf(Label phone) const;
  double Total() const;
};

// beta * onehot(y) + (1 - beta) * ReducedRow(y); one-hot when the reduced
// row is empty.
SmoothedTarget SmoothTargets(Label y, const ConfusionMatrix &cm, double beta = 0.8);

std::vector<Cue> CueLabels(const Alignment &alignment);

}  // namespace phonsim

#endif  // PHONSIM_CONFUSION_MATRIX_H_
