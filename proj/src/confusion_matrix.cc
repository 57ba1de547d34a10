// src/confusion_matrix.cc

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

#include "phonsim/confusion_matrix.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

const char *CueName(Cue cue) {
  switch (cue) {
    case Cue::kNoError: return "none";
    case Cue::kMutation: return "mut";
    case Cue::kDeletion: return "del";
    case Cue::kInsertOne: return "ins1";
    case Cue::kInsertMany: return "ins2+";
  }
  return "?";
}

Cue ParseCue(std::string_view name) {
  for (size_t i = 0; i < kNumCues; ++i) {
    Cue cue = static_cast<Cue>(i);
    if (name == CueName(cue)) return cue;
  }
  throw Error(ErrorKind::kParse, "unknown cue '" + std::string(name) + "'");
}

Cue ClassifyAlternative(Label input, std::span<const Label> output) {
  switch (output.size()) {
    case 0: return Cue::kDeletion;
    case 1: return output[0] == input ? Cue::kNoError : Cue::kMutation;
    case 2: return Cue::kInsertOne;
    default: return Cue::kInsertMany;
  }
}

const std::vector<Alternative> &ConfusionMatrix::Row(Label input) const {
  auto it = rows_.find(input);
  if (it == rows_.end())
    throw Error(ErrorKind::kInventory,
                "confusion matrix has no row for label " + std::to_string(input));
  return it->second;
}

void ConfusionMatrix::Validate(const PhoneInventory &inventory, double tolerance) const {
  for (const auto &[input, row] : rows_) {
    const std::string name = inventory.Name(input);
    if (row.empty()) throw Error(ErrorKind::kContract, "empty confusion row for " + name);
    double total = 0.0;
    for (const auto &alt : row) {
      if (!(alt.prob > 0.0))
        throw Error(ErrorKind::kContract, "nonpositive probability in row " + name);
      total += alt.prob;
    }
    if (std::fabs(total - 1.0) > tolerance)
      throw Error(ErrorKind::kContract, "row " + name + " sums to " + std::to_string(total));
  }
}

void ConfusionMatrix::SortRows(const PhoneInventory &inventory) {
  for (auto &[input, row] : rows_) {
    std::vector<std::pair<std::string, Alternative>> keyed;
    keyed.reserve(row.size());
    for (auto &alt : row) keyed.emplace_back(inventory.Format(alt.output), std::move(alt));
    std::sort(keyed.begin(), keyed.end(), [](const auto &a, const auto &b) {
      if (a.second.prob != b.second.prob) return a.second.prob > b.second.prob;
      return a.first < b.first;
    });
    row.clear();
    for (auto &entry : keyed) row.push_back(std::move(entry.second));
  }
}

ConfusionMatrix ConfusionMatrix::Identity(const PhoneInventory &inventory) {
  ConfusionMatrix cm;
  for (Label p : inventory.Phones()) cm.rows_[p] = {Alternative{{p}, 0.0, 1.0}};
  return cm;
}

ConfusionMatrix ConfusionMatrix::FromCounts(
    const std::map<Label, std::map<PhoneSeq, double>> &counts,
    const PhoneInventory &inventory, double add_k) {
  if (add_k < 0.0) throw Error(ErrorKind::kContract, "add-k must be nonnegative");
  ConfusionMatrix cm = Identity(inventory);
  for (const auto &[input, observed] : counts) {
    if (!inventory.IsPhone(input))
      throw Error(ErrorKind::kInventory, "count row for non-phone label");
    std::map<PhoneSeq, double> row_counts = observed;
    if (add_k > 0.0) {
      for (Label p : inventory.Phones()) row_counts[PhoneSeq{p}] += 0.0;
      for (auto &[output, count] : row_counts) count += add_k;
    }
    double total = 0.0;
    for (const auto &[output, count] : row_counts) total += count;
    if (!(total > 0.0)) continue;
    std::vector<Alternative> row;
    for (const auto &[output, count] : row_counts)
      if (count > 0.0) row.push_back({output, count, count / total});
    cm.rows_[input] = std::move(row);
  }
  cm.SortRows(inventory);
  return cm;
}

ConfusionMatrix ConfusionMatrix::FromProbabilities(
    const std::map<Label, std::vector<std::pair<PhoneSeq, double>>> &rows,
    const PhoneInventory &inventory) {
  ConfusionMatrix cm = Identity(inventory);
  for (const auto &[input, entries] : rows) {
    if (!inventory.IsPhone(input))
      throw Error(ErrorKind::kInventory, "row for non-phone label");
    double total = 0.0;
    for (const auto &[output, p] : entries) {
      if (p < 0.0) throw Error(ErrorKind::kContract, "negative probability");
      total += p;
    }
    if (!(total > 0.0)) throw Error(ErrorKind::kContract, "row has no mass");
    std::vector<Alternative> row;
    for (const auto &[output, p] : entries)
      if (p > 0.0) row.push_back({output, 0.0, p / total});
    cm.rows_[input] = std::move(row);
  }
  cm.SortRows(inventory);
  return cm;
}

void ConfusionMatrix::Write(std::ostream &os, const PhoneInventory &inventory) const {
  auto flags = os.flags();
  auto precision = os.precision();
  os << std::setprecision(17);
  for (const auto &[input, row] : rows_)
    for (const auto &alt : row)
      os << inventory.Name(input) << '\t' << inventory.Format(alt.output) << '\t'
         << alt.count << '\t' << alt.prob << '\n';
  os.flags(flags);
  os.precision(precision);
}

ConfusionMatrix ConfusionMatrix::Read(std::istream &is, const std::string &source,
                                      const PhoneInventory &inventory) {
  ConfusionMatrix cm;
  std::map<Label, std::vector<Alternative>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 4)
      throw ParseError(source, line_no, "expected 4 tab-separated fields");
    Alternative alt;
    Label input;
    try {
      input = inventory.PhoneLabel(fields[0]);
      alt.output = inventory.ParsePhones(fields[1]);
    } catch (const Error &e) {
      throw Error(ErrorKind::kInventory,
                  source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      size_t used = 0;
      alt.count = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("count");
      alt.prob = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument("prob");
    } catch (const std::exception &) {
      throw ParseError(source, line_no, "malformed count or probability");
    }
    rows[input].push_back(std::move(alt));
  }
  cm = Identity(inventory);
  for (auto &[input, row] : rows) cm.rows_[input] = std::move(row);
  cm.SortRows(inventory);
  cm.Validate(inventory, 1e-6);
  return cm;
}

ConfusionMatrix ConfusionMatrix::Load(const std::string &path,
                                      const PhoneInventory &inventory) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open confusion matrix " + path);
  return Read(is, path, inventory);
}

void ConfusionCounter::Add(const Alignment &alignment) {
  for (const auto &pair : alignment.pairs) counts_[pair.input][pair.output] += 1.0;
  ++num_alignments_;
}

void ConfusionCounter::Merge(const ConfusionCounter &other) {
  for (const auto &[input, row] : other.counts_)
    for (const auto &[output, count] : row) counts_[input][output] += count;
  num_alignments_ += other.num_alignments_;
}

ConfusionMatrix EstimateConfusionMatrix(std::span<const Alignment> alignments,
                                        const PhoneInventory &inventory,
                                        const EstimateOptions &opts) {
  if (alignments.empty())
    throw Error(ErrorKind::kContract, "no alignments to estimate from");
  ConfusionCounter counter;
  for (const auto &alignment : alignments) counter.Add(alignment);
  return ConfusionMatrix::FromCounts(counter.counts(), inventory, opts.add_k);
}

const CueDistribution &CollapsedErrorMatrix::Row(Label input) const {
  auto it = rows_.find(input);
  if (it == rows_.end())
    throw Error(ErrorKind::kInventory,
                "collapsed matrix has no row for label " + std::to_string(input));
  return it->second;
}

CollapsedErrorMatrix CollapseErrorTypes(const ConfusionMatrix &cm) {
  CollapsedErrorMatrix collapsed;
  for (const auto &[input, row] : cm.rows()) {
    CueDistribution dist{};
    for (const auto &alt : row)
      dist[static_cast<size_t>(ClassifyAlternative(input, alt.output))] += alt.prob;
    collapsed.rows()[input] = dist;
  }
  return collapsed;
}

std::vector<std::pair<Label, double>> ReducedRow(const ConfusionMatrix &cm, Label input) {
  std::vector<std::pair<Label, double>> reduced;
  double total = 0.0;
  for (const auto &alt : cm.Row(input)) {
    if (alt.output.size() != 1) continue;
    reduced.emplace_back(alt.output[0], alt.prob);
    total += alt.prob;
  }
  for (auto &entry : reduced) entry.second /= total;
  std::sort(reduced.begin(), reduced.end());
  return reduced;
}

double SmoothedTarget::ProbOf(Label phone) const {
  auto it = std::lower_bound(probs.begin(), probs.end(), std::make_pair(phone, -1.0));
  return (it != probs.end() && it->first == phone) ? it->second : 0.0;
}

double SmoothedTarget::Total() const {
  double total = 0.0;
  for (const auto &entry : probs) total += entry.second;
  return total;
}

SmoothedTarget SmoothTargets(Label y, const ConfusionMatrix &cm, double beta) {
  if (beta < 0.0 || beta > 1.0)
    throw Error(ErrorKind::kContract, "beta must lie in [0, 1]");
  SmoothedTarget target;
  auto reduced = ReducedRow(cm, y);
  if (reduced.empty()) {
    target.probs = {{y, 1.0}};
    return target;
  }
  std::map<Label, double> mixed{{y, beta}};
  for (const auto &[phone, p] : reduced) mixed[phone] += (1.0 - beta) * p;
  for (const auto &[phone, p] : mixed)
    if (p > 0.0 || phone == y) target.probs.emplace_back(phone, p);
  return target;
}

std::vector<Cue> CueLabels(const Alignment &alignment) {
  std::vector<Cue> cues;
  cues.reserve(alignment.pairs.size());
  for (const auto &pair : alignment.pairs)
    cues.push_back(ClassifyAlternative(pair.input, pair.output));
  return cues;
}

}  // namespace phonsim
