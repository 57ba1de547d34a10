// tools/cli.h

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

#ifndef PHONSIM_TOOLS_CLI_H_
#define PHONSIM_TOOLS_CLI_H_

#include <iosfwd>

namespace phonsim {

// Exit statuses of the command-line tool.
enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitResource = 4,
};

// Entry point of the `phonsim` tool. Artifacts go to files (or `out` when
// no output path is given); the resolved configuration and any error line
// go to `err`.
int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace phonsim

#endif  // PHONSIM_TOOLS_CLI_H_
