// src/fst.cc

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

#include "phonsim/fst.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "phonsim/error.h"
#include "phonsim/text_util.h"

namespace phonsim {

Fst::Fst(SymbolTablePtr isyms, SymbolTablePtr osyms)
    : isyms_(std::move(isyms)), osyms_(std::move(osyms)) {
  if (!isyms_ || !osyms_)
    throw Error(ErrorKind::kContract, "an FST needs both symbol tables");
}

StateId Fst::AddState() {
  states_.emplace_back();
  return static_cast<StateId>(states_.size() - 1);
}

void Fst::ReserveStates(size_t n) { states_.reserve(n); }

void Fst::SetStart(StateId s) {
  if (s < 0 || static_cast<size_t>(s) >= states_.size())
    throw Error(ErrorKind::kContract, "start state does not exist");
  start_ = s;
}

void Fst::SetFinal(StateId s, Weight w) { states_.at(s).final = w; }

void Fst::AddArc(StateId s, const Arc &arc) {
  auto &arcs = states_.at(s).arcs;
  if (input_sorted_ && !arcs.empty() && arcs.back().ilabel > arc.ilabel)
    input_sorted_ = false;
  arcs.push_back(arc);
}

std::vector<Arc> &Fst::MutableArcs(StateId s) {
  input_sorted_ = false;
  return states_.at(s).arcs;
}

size_t Fst::NumArcs() const {
  size_t total = 0;
  for (const auto &state : states_) total += state.arcs.size();
  return total;
}

void Fst::SortArcsByInput() {
  for (auto &state : states_)
    std::stable_sort(state.arcs.begin(), state.arcs.end(),
                     [](const Arc &a, const Arc &b) { return a.ilabel < b.ilabel; });
  input_sorted_ = true;
}

std::span<const Arc> Fst::ArcsWithInput(StateId s, Label label) const {
  const auto &arcs = states_[s].arcs;
  auto lo = std::lower_bound(arcs.begin(), arcs.end(), label,
                             [](const Arc &a, Label l) { return a.ilabel < l; });
  auto hi = std::upper_bound(lo, arcs.end(), label,
                             [](Label l, const Arc &a) { return l < a.ilabel; });
  return {lo, hi};
}

Fst Fst::Inverted() const {
  Fst inverted(osyms_, isyms_);
  inverted.states_ = states_;
  inverted.start_ = start_;
  for (auto &state : inverted.states_)
    for (auto &arc : state.arcs) std::swap(arc.ilabel, arc.olabel);
  inverted.input_sorted_ = states_.empty();
  return inverted;
}

void Fst::Validate() const {
  if (states_.empty()) {
    if (start_ != kNoState) throw Error(ErrorKind::kContract, "start set on empty FST");
    return;
  }
  if (start_ == kNoState) throw Error(ErrorKind::kContract, "FST has states but no start");
  const auto n = static_cast<StateId>(states_.size());
  for (StateId s = 0; s < n; ++s) {
    for (const auto &arc : states_[s].arcs) {
      if (arc.nextstate < 0 || arc.nextstate >= n)
        throw Error(ErrorKind::kContract, "arc to missing state");
      if (arc.ilabel < 0 || static_cast<size_t>(arc.ilabel) >= isyms_->size() ||
          arc.olabel < 0 || static_cast<size_t>(arc.olabel) >= osyms_->size())
        throw Error(ErrorKind::kContract, "arc label outside symbol table");
    }
  }
}

void Fst::WriteText(std::ostream &os) const {
  if (start_ == kNoState) return;
  auto flags = os.flags();
  auto precision = os.precision();
  os << std::setprecision(17);
  auto write_state = [&](StateId s) {
    for (const auto &arc : states_[s].arcs)
      os << s << '\t' << arc.nextstate << '\t' << isyms_->SymbolOf(arc.ilabel) << '\t'
         << osyms_->SymbolOf(arc.olabel) << '\t' << arc.weight << '\n';
    if (IsFinal(s)) os << s << '\t' << states_[s].final << '\n';
  };
  // The start state must head the listing; when it has neither arcs nor a
  // final weight the machine accepts nothing and is written empty.
  write_state(start_);
  for (StateId s = 0; static_cast<size_t>(s) < states_.size(); ++s)
    if (s != start_) write_state(s);
  os.flags(flags);
  os.precision(precision);
}

Fst Fst::ReadText(std::istream &is, const std::string &source,
                  SymbolTablePtr isyms, SymbolTablePtr osyms) {
  Fst fst(std::move(isyms), std::move(osyms));
  auto ensure = [&fst](long s) {
    while (fst.NumStates() <= static_cast<size_t>(s)) fst.AddState();
    return static_cast<StateId>(s);
  };
  auto parse_state = [&](const std::string &field, size_t line_no) {
    size_t used = 0;
    long s = -1;
    try {
      s = std::stol(field, &used);
    } catch (const std::exception &) {
    }
    if (s < 0 || used != field.size())
      throw ParseError(source, line_no, "bad state id '" + field + "'");
    return s;
  };
  auto parse_weight = [&](const std::string &field, size_t line_no) {
    size_t used = 0;
    double w = 0.0;
    try {
      w = std::stod(field, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != field.size() || field.empty())
      throw ParseError(source, line_no, "bad weight '" + field + "'");
    return w;
  };
  std::string line;
  size_t line_no = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    StateId src = ensure(parse_state(fields[0], line_no));
    if (first) {
      fst.SetStart(src);
      first = false;
    }
    if (fields.size() == 5) {
      StateId dst = ensure(parse_state(fields[1], line_no));
      auto in = fst.isyms_->Find(fields[2]);
      auto out = fst.osyms_->Find(fields[3]);
      if (!in || !out)
        throw Error(ErrorKind::kSymbol, source + ":" + std::to_string(line_no) +
                                            ": unknown label");
      fst.AddArc(src, {*in, *out, parse_weight(fields[4], line_no), dst});
    } else if (fields.size() == 1 || fields.size() == 2) {
      fst.SetFinal(src, fields.size() == 2 ? parse_weight(fields[1], line_no) : 0.0);
    } else {
      throw ParseError(source, line_no, "expected 1, 2 or 5 tab-separated fields");
    }
  }
  return fst;
}

void Fst::Save(const std::string &prefix) const {
  std::ofstream fst_out(prefix + ".fst.txt"), isyms_out(prefix + ".isyms"),
      osyms_out(prefix + ".osyms");
  if (!fst_out || !isyms_out || !osyms_out)
    throw Error(ErrorKind::kIo, "cannot write FST files at " + prefix);
  WriteText(fst_out);
  isyms_->Write(isyms_out);
  osyms_->Write(osyms_out);
}

Fst Fst::LoadSaved(const std::string &prefix) {
  auto read_table = [](const std::string &path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::kIo, "cannot open " + path);
    return std::make_shared<const SymbolTable>(SymbolTable::Read(is, path));
  };
  auto isyms = read_table(prefix + ".isyms");
  auto osyms = read_table(prefix + ".osyms");
  std::ifstream is(prefix + ".fst.txt");
  if (!is) throw Error(ErrorKind::kIo, "cannot open " + prefix + ".fst.txt");
  return ReadText(is, prefix + ".fst.txt", isyms, osyms);
}

}  // namespace phonsim
