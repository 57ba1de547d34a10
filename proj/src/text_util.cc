// src/text_util.cc

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

#include "phonsim/text_util.h"

#include <cctype>

namespace phonsim {

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<std::string> SplitTabs(std::string_view text) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = text.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.emplace_back(text.substr(start));
      break;
    }
    fields.emplace_back(text.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string Join(const std::vector<std::string> &words, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

std::vector<std::string> NormalizeWords(std::string_view text, bool lowercase) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    // Bytes >= 0x80 belong to UTF-8 sequences and pass through untouched.
    if (u < 0x80 && std::ispunct(u) && c != '\'') {
      cleaned += ' ';
    } else {
      cleaned += (lowercase && u < 0x80) ? static_cast<char>(std::tolower(u)) : c;
    }
  }
  return SplitWhitespace(cleaned);
}

}  // namespace phonsim
