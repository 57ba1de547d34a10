// include/phonsim/jsonl_io.h

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

#ifndef PHONSIM_JSONL_IO_H_
#define PHONSIM_JSONL_IO_H_

#include <iosfwd>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "phonsim/eval.h"
#include "phonsim/simulate.h"

namespace phonsim {

// {"id": ..., "steps": [[[symbol, prob], ...], ...]} per line. Several
// lines may share an id (one per sampled cue sequence).
std::vector<StepDistributions> ReadStepDistributions(std::istream &is, const std::string &source,
                                                     const PhoneInventory &inventory);
void WriteStepDistributions(std::ostream &os, const StepDistributions &dists,
                            const PhoneInventory &inventory);

// {"id": ..., "alternatives": [{"text", "rank", "score", "freq"}, ...]}.
void WriteNBestLine(std::ostream &os, const std::string &id, const NBestList &list);
Predictions ReadPredictions(std::istream &is, const std::string &source);

// Replays stored distributions: the i-th request for an utterance gets the
// i-th stored record for its id, then std::nullopt. Requested cues are
// ignored since the records were produced offline.
class FileDistributionProvider : public DistributionProvider {
 public:
  explicit FileDistributionProvider(std::vector<StepDistributions> records);

  std::optional<StepDistributions> Next(const std::string &utterance_id,
                                        std::span<const Label> phones,
                                        std::span<const Cue> cues) override;
  bool Has(const std::string &utterance_id) const { return records_.count(utterance_id) > 0; }

 private:
  std::map<std::string, std::vector<StepDistributions>> records_;
  std::map<std::string, size_t> served_;
  std::mutex mutex_;
};

}  // namespace phonsim

#endif  // PHONSIM_JSONL_IO_H_
