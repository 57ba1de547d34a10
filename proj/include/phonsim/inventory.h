// include/phonsim/inventory.h

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

#ifndef PHONSIM_INVENTORY_H_
#define PHONSIM_INVENTORY_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phonsim/symbol_table.h"

namespace phonsim {

using PhoneSeq = std::vector<Label>;

/// A phone set with binary articulatory features.
///
/// Phones occupy labels 1..NumPhones() of symbols(); the end-of-sequence
/// marker takes the label right after them. Epsilon and EOS are reserved
/// and never count as phones.
class PhoneInventory {
 public:
  PhoneInventory(std::vector<std::string> names,
                 std::vector<std::vector<uint8_t>> features,
                 std::vector<std::string> feature_names = {});

  static PhoneInventory Load(const std::string &path);
  static PhoneInventory Parse(std::istream &is, const std::string &source);
  void Write(std::ostream &os) const;

  const SymbolTablePtr &symbols() const { return symbols_; }
  Label eos() const { return eos_; }
  size_t NumPhones() const { return features_.size(); }
  size_t NumFeatures() const { return num_features_; }
  const std::vector<std::string> &feature_names() const { return feature_names_; }

  bool IsPhone(Label label) const {
    return label >= 1 && static_cast<size_t>(label) <= NumPhones();
  }
  std::vector<Label> Phones() const;

  // Throws kInventory for symbols outside the pronunciation inventory.
  Label PhoneLabel(std::string_view symbol) const;
  const std::string &Name(Label label) const { return symbols_->SymbolOf(label); }
  const std::vector<uint8_t> &Features(Label phone) const;

  // Hamming distance between feature vectors divided by vector length.
  double Distance(Label a, Label b) const;

  // Space-joined phone names; "-" for the empty sequence.
  std::string Format(std::span<const Label> phones) const;
  PhoneSeq ParsePhones(std::string_view text) const;

 private:
  SymbolTablePtr symbols_;
  Label eos_;
  size_t num_features_;
  std::vector<std::vector<uint8_t>> features_;  // indexed by label - 1
  std::vector<std::string> feature_names_;
};

}  // namespace phonsim

#endif  // PHONSIM_INVENTORY_H_
