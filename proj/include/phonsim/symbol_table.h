// include/phonsim/symbol_table.h

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

#ifndef PHONSIM_SYMBOL_TABLE_H_
#define PHONSIM_SYMBOL_TABLE_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace phonsim {

using Label = int32_t;

inline constexpr Label kEpsilon = 0;
inline constexpr std::string_view kEpsilonSymbol = "<eps>";
inline constexpr std::string_view kEosSymbol = "<eos>";

// Bidirectional string <-> label map. Label 0 is always epsilon.
class SymbolTable {
 public:
  SymbolTable();

  // Returns the existing label if the symbol is already present.
  Label AddSymbol(std::string_view symbol);

  std::optional<Label> Find(std::string_view symbol) const;
  // Throws kSymbol on unknown symbols.
  Label LabelOf(std::string_view symbol) const;
  const std::string &SymbolOf(Label label) const;

  bool Contains(std::string_view symbol) const { return Find(symbol).has_value(); }
  size_t size() const { return symbols_.size(); }
  const std::vector<std::string> &symbols() const { return symbols_; }

  bool operator==(const SymbolTable &other) const {
    return symbols_ == other.symbols_;
  }

  // "symbol<TAB>id" per line.
  void Write(std::ostream &os) const;
  static SymbolTable Read(std::istream &is, const std::string &source);

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Label> index_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

// Pointer-equality fast path, then content comparison.
bool SameSymbols(const SymbolTable *a, const SymbolTable *b);

}  // namespace phonsim

#endif  // PHONSIM_SYMBOL_TABLE_H_
