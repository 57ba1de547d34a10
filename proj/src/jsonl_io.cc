// src/jsonl_io.cc

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

#include "phonsim/jsonl_io.h"

#include <istream>
#include <ostream>

#include "json.hpp"
#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<StepDistributions> ReadStepDistributions(std::istream &is, const std::string &source,
                                                     const PhoneInventory &inventory) {
  std::vector<StepDistributions> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    StepDistributions dists;
    try {
      json j = json::parse(line);
      dists.id = j.at("id").get<std::string>();
      for (const auto &step : j.at("steps")) {
        std::vector<std::pair<Label, double>> entries;
        for (const auto &pair : step) {
          if (!pair.is_array() || pair.size() != 2)
            throw ParseError(source, line_no, "step entries must be [symbol, prob]");
          const auto symbol = pair[0].get<std::string>();
          Label label = symbol == kEosSymbol ? inventory.eos() : inventory.PhoneLabel(symbol);
          entries.emplace_back(label, pair[1].get<double>());
        }
        dists.steps.push_back(std::move(entries));
      }
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, e.what());
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      throw Error(e.kind(), source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    records.push_back(std::move(dists));
  }
  return records;
}

void WriteStepDistributions(std::ostream &os, const StepDistributions &dists,
                            const PhoneInventory &inventory) {
  ordered_json j;
  j["id"] = dists.id;
  j["steps"] = json::array();
  for (const auto &step : dists.steps) {
    ordered_json entries = ordered_json::array();
    for (const auto &[label, p] : step) entries.push_back({inventory.Name(label), p});
    j["steps"].push_back(ordered_json(std::move(entries)));
  }
  os << j.dump() << '\n';
}

void WriteNBestLine(std::ostream &os, const std::string &id, const NBestList &list) {
  ordered_json j;
  j["id"] = id;
  j["alternatives"] = json::array();
  for (size_t r = 0; r < list.entries.size(); ++r) {
    const auto &entry = list.entries[r];
    ordered_json alt;
    alt["text"] = Join(entry.words);
    alt["rank"] = r + 1;
    alt["score"] = entry.score;
    alt["freq"] = entry.freq;
    j["alternatives"].push_back(std::move(alt));
  }
  if (list.empty_composition) j["empty_composition"] = true;
  if (list.skipped_iterations > 0) j["skipped_iterations"] = list.skipped_iterations;
  os << j.dump() << '\n';
}

Predictions ReadPredictions(std::istream &is, const std::string &source) {
  Predictions predictions;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      json j = json::parse(line);
      auto id = j.at("id").get<std::string>();
      if (predictions.count(id))
        throw Error(ErrorKind::kDuplicate, source + ":" + std::to_string(line_no) +
                                               ": duplicate prediction id '" + id + "'");
      auto &alts = predictions[id];
      for (const auto &alt : j.at("alternatives"))
        alts.push_back(SplitWhitespace(alt.at("text").get<std::string>()));
    } catch (const json::exception &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return predictions;
}

FileDistributionProvider::FileDistributionProvider(std::vector<StepDistributions> records) {
  for (auto &record : records) {
    ValidateStepDistributions(record);
    records_[record.id].push_back(std::move(record));
  }
}

std::optional<StepDistributions> FileDistributionProvider::Next(const std::string &utterance_id,
                                                                std::span<const Label>,
                                                                std::span<const Cue>) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = records_.find(utterance_id);
  if (it == records_.end())
    throw Error(ErrorKind::kProvider, "no stored distributions for '" + utterance_id + "'");
  size_t &served = served_[utterance_id];
  if (served >= it->second.size()) return std::nullopt;
  return it->second[served++];
}

}  // namespace phonsim
