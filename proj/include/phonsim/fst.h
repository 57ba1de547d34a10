// include/phonsim/fst.h

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

#ifndef PHONSIM_FST_H_
#define PHONSIM_FST_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phonsim/symbol_table.h"

namespace phonsim {

using StateId = int32_t;
// Tropical weight: negative natural-log probability.
using Weight = double;

inline constexpr StateId kNoState = -1;
inline constexpr Weight kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
  Label ilabel;
  Label olabel;
  Weight weight;
  StateId nextstate;

  bool operator==(const Arc &) const = default;
};

/// Mutable weighted transducer in the tropical semiring.
///
/// Arcs are stored per state. Input and output symbol tables are explicit
/// and shared; an acceptor simply uses the same table on both sides.
class Fst {
 public:
  Fst(SymbolTablePtr isyms, SymbolTablePtr osyms);

  StateId AddState();
  void SetStart(StateId s);
  void SetFinal(StateId s, Weight w);
  void AddArc(StateId s, const Arc &arc);
  void ReserveStates(size_t n);

  StateId Start() const { return start_; }
  Weight Final(StateId s) const { return states_[s].final; }
  bool IsFinal(StateId s) const { return states_[s].final != kInfinity; }
  size_t NumStates() const { return states_.size(); }
  size_t NumArcs() const;
  std::span<const Arc> Arcs(StateId s) const { return states_[s].arcs; }
  std::vector<Arc> &MutableArcs(StateId s);
  bool Empty() const { return start_ == kNoState; }

  const SymbolTablePtr &InputSymbols() const { return isyms_; }
  const SymbolTablePtr &OutputSymbols() const { return osyms_; }

  // Sorts every state's arcs by input label so lookups can bisect.
  void SortArcsByInput();
  bool input_sorted() const { return input_sorted_; }
  // Arcs of `s` whose input label equals `label`. Requires input_sorted().
  std::span<const Arc> ArcsWithInput(StateId s, Label label) const;

  // Swaps input and output labels and tables.
  Fst Inverted() const;

  // Throws kContract when a structural invariant is broken.
  void Validate() const;

  // One arc per line "src<TAB>dst<TAB>in<TAB>out<TAB>weight", final states
  // as "state<TAB>weight"; the first line's source is the start state.
  // Labels are written as symbols.
  void WriteText(std::ostream &os) const;
  static Fst ReadText(std::istream &is, const std::string &source,
                      SymbolTablePtr isyms, SymbolTablePtr osyms);

  // Writes <prefix>.fst.txt, <prefix>.isyms and <prefix>.osyms.
  void Save(const std::string &prefix) const;
  static Fst LoadSaved(const std::string &prefix);

 private:
  struct State {
    Weight final = kInfinity;
    std::vector<Arc> arcs;
  };

  SymbolTablePtr isyms_;
  SymbolTablePtr osyms_;
  std::vector<State> states_;
  StateId start_ = kNoState;
  bool input_sorted_ = true;
};

}  // namespace phonsim

#endif  // PHONSIM_FST_H_
