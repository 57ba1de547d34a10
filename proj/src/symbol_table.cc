// src/symbol_table.cc

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

#include "phonsim/symbol_table.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "phonsim/error.h"

namespace phonsim {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInventory: return "inventory";
    case ErrorKind::kMissingWord: return "missing-word";
    case ErrorKind::kDuplicate: return "duplicate";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kSymbol: return "symbol";
    case ErrorKind::kResource: return "resource";
    case ErrorKind::kProvider: return "provider";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

SymbolTable::SymbolTable() { AddSymbol(kEpsilonSymbol); }

Label SymbolTable::AddSymbol(std::string_view symbol) {
  std::string key(symbol);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Label label = static_cast<Label>(symbols_.size());
  symbols_.push_back(key);
  index_.emplace(std::move(key), label);
  return label;
}

std::optional<Label> SymbolTable::Find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Label SymbolTable::LabelOf(std::string_view symbol) const {
  auto label = Find(symbol);
  if (!label)
    throw Error(ErrorKind::kSymbol,
                "unknown symbol '" + std::string(symbol) + "'");
  return *label;
}

const std::string &SymbolTable::SymbolOf(Label label) const {
  if (label < 0 || static_cast<size_t>(label) >= symbols_.size())
    throw Error(ErrorKind::kSymbol,
                "label out of range: " + std::to_string(label));
  return symbols_[label];
}

void SymbolTable::Write(std::ostream &os) const {
  for (size_t i = 0; i < symbols_.size(); ++i)
    os << symbols_[i] << '\t' << i << '\n';
}

SymbolTable SymbolTable::Read(std::istream &is, const std::string &source) {
  SymbolTable table;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string symbol;
    long id = -1;
    if (!(fields >> symbol >> id))
      throw ParseError(source, line_no, "expected 'symbol id'");
    if (id == 0) {
      if (symbol != kEpsilonSymbol)
        throw ParseError(source, line_no, "label 0 must be " +
                                              std::string(kEpsilonSymbol));
      continue;
    }
    if (static_cast<size_t>(id) != table.size())
      throw ParseError(source, line_no, "symbol ids must be dense and ordered");
    if (table.Contains(symbol))
      throw ParseError(source, line_no, "duplicate symbol '" + symbol + "'");
    table.AddSymbol(symbol);
  }
  return table;
}

bool SameSymbols(const SymbolTable *a, const SymbolTable *b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  return *a == *b;
}

}  // namespace phonsim
