// src/align.cc

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

#include "phonsim/align.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "phonsim/error.h"

namespace phonsim {

namespace {

bool Near(double a, double b) { return std::fabs(a - b) <= 1e-12; }

}  // namespace

std::vector<EditStep> AlignEditScript(std::span<const Label> ref,
                                      std::span<const Label> hyp,
                                      const PhoneInventory &inventory,
                                      const AlignOptions &opts, double *cost) {
  const size_t n = ref.size(), m = hyp.size();
  const double indel = opts.indel_cost;
  std::vector<double> table((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> double & { return table[i * (m + 1) + j]; };

  for (size_t i = 0; i <= n; ++i) at(i, 0) = indel * i;
  for (size_t j = 0; j <= m; ++j) at(0, j) = indel * j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      double sub = at(i - 1, j - 1) + inventory.Distance(ref[i - 1], hyp[j - 1]);
      double del = at(i - 1, j) + indel;
      double ins = at(i, j - 1) + indel;
      at(i, j) = std::min({sub, del, ins});
    }
  }
  if (cost) *cost = at(n, m);

  std::vector<EditStep> script;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        Near(at(i, j), at(i - 1, j - 1) + inventory.Distance(ref[i - 1], hyp[j - 1]))) {
      script.push_back({EditOp::kSubstitute, ref[i - 1], hyp[j - 1]});
      --i, --j;
    } else if (i > 0 && Near(at(i, j), at(i - 1, j) + indel)) {
      script.push_back({EditOp::kDelete, ref[i - 1], kEpsilon});
      --i;
    } else {
      script.push_back({EditOp::kInsert, kEpsilon, hyp[j - 1]});
      --j;
    }
  }
  std::reverse(script.begin(), script.end());
  return script;
}

std::vector<AlignedPair> GroupEditScript(std::span<const EditStep> script) {
  std::vector<AlignedPair> pairs;
  PhoneSeq leading;
  for (const auto &step : script) {
    switch (step.op) {
      case EditOp::kSubstitute:
      case EditOp::kDelete: {
        AlignedPair pair{step.ref, {}};
        if (pairs.empty()) pair.output = std::move(leading);
        if (step.op == EditOp::kSubstitute) pair.output.push_back(step.hyp);
        pairs.push_back(std::move(pair));
        break;
      }
      case EditOp::kInsert:
        if (pairs.empty())
          leading.push_back(step.hyp);
        else
          pairs.back().output.push_back(step.hyp);
        break;
    }
  }
  if (!leading.empty() && pairs.empty())
    throw Error(ErrorKind::kContract, "edit script has insertions but no reference phones");
  return pairs;
}

Alignment AlignPhones(std::span<const Label> ref, std::span<const Label> hyp,
                      const PhoneInventory &inventory, const AlignOptions &opts) {
  if (ref.empty()) throw Error(ErrorKind::kContract, "cannot align an empty reference");
  Alignment alignment;
  auto script = AlignEditScript(ref, hyp, inventory, opts, &alignment.cost);
  alignment.pairs = GroupEditScript(script);
  return alignment;
}

void WriteAlignment(std::ostream &os, const Alignment &alignment,
                    const PhoneInventory &inventory) {
  for (const auto &pair : alignment.pairs)
    os << inventory.Name(pair.input) << '\t' << inventory.Format(pair.output) << '\n';
  os << '\n';
}

}  // namespace phonsim
