// include/phonsim/text_util.h

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

#ifndef PHONSIM_TEXT_UTIL_H_
#define PHONSIM_TEXT_UTIL_H_

#include <string>
#include <string_view>
#include <vector>

namespace phonsim {

std::vector<std::string> SplitWhitespace(std::string_view text);

// Splits on every tab; keeps empty fields.
std::vector<std::string> SplitTabs(std::string_view text);

std::string Join(const std::vector<std::string> &words, std::string_view sep = " ");

// Optional ASCII lowercasing, then removal of punctuation other than
// apostrophes, then whitespace tokenization.
std::vector<std::string> NormalizeWords(std::string_view text, bool lowercase);

}  // namespace phonsim

#endif  // PHONSIM_TEXT_UTIL_H_
