// src/inventory.cc

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

#include "phonsim/inventory.h"

#include <fstream>
#include <sstream>

#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

PhoneInventory::PhoneInventory(std::vector<std::string> names,
                               std::vector<std::vector<uint8_t>> features,
                               std::vector<std::string> feature_names)
    : num_features_(0),
      features_(std::move(features)),
      feature_names_(std::move(feature_names)) {
  if (names.empty())
    throw Error(ErrorKind::kInventory, "phone inventory is empty");
  if (names.size() != features_.size())
    throw Error(ErrorKind::kInventory, "one feature vector per phone required");
  num_features_ = features_.front().size();
  auto table = std::make_shared<SymbolTable>();
  for (size_t i = 0; i < names.size(); ++i) {
    const std::string &name = names[i];
    if (name.empty() || name == kEpsilonSymbol || name == kEosSymbol)
      throw Error(ErrorKind::kInventory, "reserved or empty phone symbol '" + name + "'");
    if (table->Contains(name))
      throw Error(ErrorKind::kInventory, "duplicate phone '" + name + "'");
    if (features_[i].size() != num_features_)
      throw Error(ErrorKind::kInventory,
                  "feature vector length mismatch for phone '" + name + "'");
    table->AddSymbol(name);
  }
  if (num_features_ == 0)
    throw Error(ErrorKind::kInventory, "feature vectors must be nonempty");
  if (!feature_names_.empty() && feature_names_.size() != num_features_)
    throw Error(ErrorKind::kInventory, "feature name count mismatch");
  eos_ = table->AddSymbol(kEosSymbol);
  symbols_ = std::move(table);
}

PhoneInventory PhoneInventory::Load(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::kIo, "cannot open inventory " + path);
  return Parse(is, path);
}

PhoneInventory PhoneInventory::Parse(std::istream &is,
                                     const std::string &source) {
  std::vector<std::string> names;
  std::vector<std::vector<uint8_t>> features;
  std::vector<std::string> feature_names;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "#features") {
      feature_names.assign(tokens.begin() + 1, tokens.end());
      continue;
    }
    if (tokens[0][0] == '#') continue;
    if (tokens.size() < 2)
      throw ParseError(source, line_no, "expected 'phone feature-bits'");
    std::vector<uint8_t> bits;
    for (size_t t = 1; t < tokens.size(); ++t) {
      for (char c : tokens[t]) {
        if (c != '0' && c != '1')
          throw ParseError(source, line_no, "feature bits must be 0 or 1");
        bits.push_back(c == '1');
      }
    }
    if (!features.empty() && bits.size() != features.front().size())
      throw ParseError(source, line_no, "feature vector length differs");
    names.push_back(tokens[0]);
    features.push_back(std::move(bits));
  }
  return PhoneInventory(std::move(names), std::move(features),
                        std::move(feature_names));
}

void PhoneInventory::Write(std::ostream &os) const {
  if (!feature_names_.empty()) {
    os << "#features";
    for (const auto &name : feature_names_) os << ' ' << name;
    os << '\n';
  }
  for (Label p = 1; static_cast<size_t>(p) <= NumPhones(); ++p) {
    os << Name(p) << ' ';
    for (uint8_t bit : features_[p - 1]) os << (bit ? '1' : '0');
    os << '\n';
  }
}

std::vector<Label> PhoneInventory::Phones() const {
  std::vector<Label> phones(NumPhones());
  for (size_t i = 0; i < phones.size(); ++i) phones[i] = static_cast<Label>(i + 1);
  return phones;
}

Label PhoneInventory::PhoneLabel(std::string_view symbol) const {
  auto label = symbols_->Find(symbol);
  if (!label || !IsPhone(*label))
    throw Error(ErrorKind::kInventory,
                "phone '" + std::string(symbol) + "' not in inventory");
  return *label;
}

const std::vector<uint8_t> &PhoneInventory::Features(Label phone) const {
  if (!IsPhone(phone))
    throw Error(ErrorKind::kInventory,
                "label " + std::to_string(phone) + " is not a phone");
  return features_[phone - 1];
}

double PhoneInventory::Distance(Label a, Label b) const {
  const auto &fa = Features(a);
  const auto &fb = Features(b);
  size_t differing = 0;
  for (size_t i = 0; i < num_features_; ++i) differing += fa[i] != fb[i];
  return static_cast<double>(differing) / static_cast<double>(num_features_);
}

std::string PhoneInventory::Format(std::span<const Label> phones) const {
  if (phones.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < phones.size(); ++i) {
    if (i) out += ' ';
    out += symbols_->SymbolOf(phones[i]);
  }
  return out;
}

PhoneSeq PhoneInventory::ParsePhones(std::string_view text) const {
  PhoneSeq phones;
  for (const auto &token : SplitWhitespace(text)) {
    if (token == "-") continue;
    phones.push_back(PhoneLabel(token));
  }
  return phones;
}

}  // namespace phonsim
