// include/phonsim/error.h

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

#ifndef PHONSIM_ERROR_H_
#define PHONSIM_ERROR_H_

#include <stdexcept>
#include <string>

namespace phonsim {

enum class ErrorKind {
  kParse,
  kInventory,
  kMissingWord,
  kDuplicate,
  kContract,
  kSymbol,
  kResource,
  kProvider,
  kIo,
};

const char *ErrorKindName(ErrorKind kind);

/// Exception carrying a machine-readable category alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse error that records the 1-based line it came from.
class ParseError : public Error {
 public:
  ParseError(const std::string &source, size_t line, const std::string &what)
      : Error(ErrorKind::kParse,
              source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

}  // namespace phonsim

#endif  // PHONSIM_ERROR_H_
