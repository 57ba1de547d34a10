// include/phonsim/align.h

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

#ifndef PHONSIM_ALIGN_H_
#define PHONSIM_ALIGN_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "phonsim/inventory.h"

namespace phonsim {

// One reference phone and the hypothesis phones it was realized as:
// empty for a deletion, one phone for identity or mutation, several for an
// insertion.
struct AlignedPair {
  Label input;
  PhoneSeq output;

  bool IsIdentity() const { return output.size() == 1 && output[0] == input; }
  bool operator==(const AlignedPair &) const = default;
};

struct Alignment {
  std::vector<AlignedPair> pairs;
  double cost = 0.0;
};

enum class EditOp { kSubstitute, kDelete, kInsert };

struct EditStep {
  EditOp op;
  Label ref;  // kEpsilon for insertions
  Label hyp;  // kEpsilon for deletions
};

struct AlignOptions {
  double indel_cost = 0.7;
};

// Feature-based distance in [0, 1]; symmetric, zero only for equal phones.
inline double PhoneDistance(const PhoneInventory &inventory, Label a, Label b) {
  return inventory.Distance(a, b);
}

// Minimum-cost edit script. Among equal-cost scripts the backtrace prefers
// substitution, then deletion, then insertion.
std::vector<EditStep> AlignEditScript(std::span<const Label> ref,
                                      std::span<const Label> hyp,
                                      const PhoneInventory &inventory,
                                      const AlignOptions &opts = {},
                                      double *cost = nullptr);

// Groups an edit script per reference phone. Insertions attach to the
// closest preceding reference phone; leading ones go to the first.
std::vector<AlignedPair> GroupEditScript(std::span<const EditStep> script);

// Throws kContract when ref is empty.
Alignment AlignPhones(std::span<const Label> ref, std::span<const Label> hyp,
                      const PhoneInventory &inventory,
                      const AlignOptions &opts = {});

// "input<TAB>outputs" per pair; outputs space-separated, "-" when empty.
// A blank line closes the utterance.
void WriteAlignment(std::ostream &os, const Alignment &alignment,
                    const PhoneInventory &inventory);

}  // namespace phonsim

#endif  // PHONSIM_ALIGN_H_
