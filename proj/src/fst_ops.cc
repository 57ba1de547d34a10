// src/fst_ops.cc

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

#include "phonsim/fst_ops.h"

#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "phonsim/error.h"

namespace phonsim {

Fst LinearChainFst(std::span<const Label> labels, SymbolTablePtr symbols) {
  Fst fst(symbols, symbols);
  StateId prev = fst.AddState();
  fst.SetStart(prev);
  for (Label label : labels) {
    if (label <= 0 || static_cast<size_t>(label) >= symbols->size())
      throw Error(ErrorKind::kSymbol, "label " + std::to_string(label) +
                                          " not in symbol table");
    StateId next = fst.AddState();
    fst.AddArc(prev, {label, label, 0.0, next});
    prev = next;
  }
  fst.SetFinal(prev, 0.0);
  return fst;
}

Fst LinearChainFst(std::span<const std::string> symbols_in, SymbolTablePtr symbols) {
  std::vector<Label> labels;
  labels.reserve(symbols_in.size());
  for (const auto &symbol : symbols_in) labels.push_back(symbols->LabelOf(symbol));
  return LinearChainFst(labels, std::move(symbols));
}

void Connect(Fst *fst) {
  if (fst->Empty()) return;
  const size_t n = fst->NumStates();
  std::vector<uint8_t> accessible(n, 0), coaccessible(n, 0);
  std::vector<std::vector<StateId>> reverse(n);
  std::vector<StateId> stack{fst->Start()};
  accessible[fst->Start()] = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto &arc : fst->Arcs(s)) {
      reverse[arc.nextstate].push_back(s);
      if (!accessible[arc.nextstate]) {
        accessible[arc.nextstate] = 1;
        stack.push_back(arc.nextstate);
      }
    }
  }
  for (StateId s = 0; static_cast<size_t>(s) < n; ++s) {
    if (accessible[s] && fst->IsFinal(s)) {
      coaccessible[s] = 1;
      stack.push_back(s);
    }
  }
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId p : reverse[s]) {
      if (!coaccessible[p]) {
        coaccessible[p] = 1;
        stack.push_back(p);
      }
    }
  }

  Fst trimmed(fst->InputSymbols(), fst->OutputSymbols());
  std::vector<StateId> remap(n, kNoState);
  for (StateId s = 0; static_cast<size_t>(s) < n; ++s)
    if (accessible[s] && coaccessible[s]) remap[s] = trimmed.AddState();
  if (remap[fst->Start()] != kNoState) {
    trimmed.SetStart(remap[fst->Start()]);
    for (StateId s = 0; static_cast<size_t>(s) < n; ++s) {
      if (remap[s] == kNoState) continue;
      trimmed.SetFinal(remap[s], fst->Final(s));
      for (const auto &arc : fst->Arcs(s))
        if (remap[arc.nextstate] != kNoState)
          trimmed.AddArc(remap[s], {arc.ilabel, arc.olabel, arc.weight, remap[arc.nextstate]});
    }
  } else {
    trimmed = Fst(fst->InputSymbols(), fst->OutputSymbols());
  }
  *fst = std::move(trimmed);
}

namespace {

// Composition filter states.
enum : uint8_t {
  kFilterAny = 0,    // no epsilon move pending
  kFilterLeft = 1,   // `a` moved alone on an output epsilon
  kFilterRight = 2,  // `b` moved alone on an input epsilon
};

struct ComposeTuple {
  StateId a, b;
  uint8_t filter;
};

}  // namespace

Fst Compose(const Fst &a, const Fst &b, const ComposeOptions &opts) {
  if (!SameSymbols(a.OutputSymbols().get(), b.InputSymbols().get()))
    throw Error(ErrorKind::kContract,
                "compose: output symbols of the left machine differ from the "
                "input symbols of the right machine");
  Fst result(a.InputSymbols(), b.OutputSymbols());
  if (a.Empty() || b.Empty()) return result;

  // Lookups into `b` bisect sorted arcs; sort a private copy if needed.
  const Fst *right = &b;
  Fst sorted_copy(b.InputSymbols(), b.OutputSymbols());
  if (!b.input_sorted()) {
    sorted_copy = b;
    sorted_copy.SortArcsByInput();
    right = &sorted_copy;
  }

  const uint64_t b_states = right->NumStates();
  auto key_of = [b_states](const ComposeTuple &t) {
    return (static_cast<uint64_t>(t.a) * b_states + static_cast<uint64_t>(t.b)) * 3 + t.filter;
  };
  std::unordered_map<uint64_t, StateId> index;
  std::vector<ComposeTuple> tuples;
  std::deque<StateId> queue;
  auto find_or_add = [&](const ComposeTuple &t) {
    auto [it, inserted] = index.try_emplace(key_of(t), kNoState);
    if (inserted) {
      it->second = result.AddState();
      tuples.push_back(t);
      queue.push_back(it->second);
    }
    return it->second;
  };

  result.SetStart(find_or_add({a.Start(), right->Start(), kFilterAny}));
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    const ComposeTuple t = tuples[s];
    Weight final_weight = a.Final(t.a) + right->Final(t.b);
    if (final_weight != kInfinity) result.SetFinal(s, final_weight);

    auto b_epsilons = right->ArcsWithInput(t.b, kEpsilon);
    for (const auto &arc_a : a.Arcs(t.a)) {
      if (arc_a.olabel == kEpsilon) {
        if (t.filter != kFilterRight) {
          StateId next = find_or_add({arc_a.nextstate, t.b, kFilterLeft});
          result.AddArc(s, {arc_a.ilabel, kEpsilon, arc_a.weight, next});
        }
        if (t.filter == kFilterAny) {
          for (const auto &arc_b : b_epsilons) {
            StateId next = find_or_add({arc_a.nextstate, arc_b.nextstate, kFilterAny});
            result.AddArc(s, {arc_a.ilabel, arc_b.olabel, arc_a.weight + arc_b.weight, next});
          }
        }
        continue;
      }
      for (const auto &arc_b : right->ArcsWithInput(t.b, arc_a.olabel)) {
        StateId next = find_or_add({arc_a.nextstate, arc_b.nextstate, kFilterAny});
        result.AddArc(s, {arc_a.ilabel, arc_b.olabel, arc_a.weight + arc_b.weight, next});
      }
    }
    if (t.filter != kFilterLeft) {
      for (const auto &arc_b : b_epsilons) {
        StateId next = find_or_add({t.a, arc_b.nextstate, kFilterRight});
        result.AddArc(s, {kEpsilon, arc_b.olabel, arc_b.weight, next});
      }
    }
  }
  if (opts.connect) Connect(&result);
  return result;
}

std::vector<Weight> ShortestDistanceToFinal(const Fst &fst) {
  const size_t n = fst.NumStates();
  std::vector<Weight> dist(n, kInfinity);
  std::vector<std::vector<std::pair<StateId, Weight>>> reverse(n);
  std::deque<StateId> queue;
  std::vector<uint8_t> queued(n, 0);
  for (StateId s = 0; static_cast<size_t>(s) < n; ++s) {
    for (const auto &arc : fst.Arcs(s)) reverse[arc.nextstate].emplace_back(s, arc.weight);
    if (fst.IsFinal(s)) {
      dist[s] = fst.Final(s);
      queue.push_back(s);
      queued[s] = 1;
    }
  }
  // Label-correcting relaxation; tolerates negative arcs (backoff weights)
  // as long as no negative cycle exists.
  const size_t max_relaxations = (n + 1) * (fst.NumArcs() + 1) + 16;
  size_t relaxations = 0;
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    queued[s] = 0;
    for (const auto &[p, w] : reverse[s]) {
      Weight candidate = w + dist[s];
      if (candidate < dist[p]) {
        if (++relaxations > max_relaxations)
          throw Error(ErrorKind::kResource, "shortest distance does not converge");
        dist[p] = candidate;
        if (!queued[p]) {
          queued[p] = 1;
          queue.push_back(p);
        }
      }
    }
  }
  return dist;
}

namespace {

// Output prefixes shared as a trie so search entries stay small.
class PrefixTrie {
 public:
  PrefixTrie() : nodes_{{kNoNode, kEpsilon}} {}

  uint32_t Child(uint32_t parent, Label label) {
    uint64_t key = (static_cast<uint64_t>(parent) << 32) | static_cast<uint32_t>(label);
    auto [it, inserted] = children_.try_emplace(key, static_cast<uint32_t>(nodes_.size()));
    if (inserted) nodes_.push_back({parent, label});
    return it->second;
  }

  std::vector<Label> Labels(uint32_t node) const {
    std::vector<Label> labels;
    for (; node != 0; node = nodes_[node].parent) labels.push_back(nodes_[node].label);
    return {labels.rbegin(), labels.rend()};
  }

 private:
  static constexpr uint32_t kNoNode = 0xffffffffu;
  struct Node {
    uint32_t parent;
    Label label;
  };
  std::vector<Node> nodes_;
  std::unordered_map<uint64_t, uint32_t> children_;
};

struct SearchEntry {
  Weight priority;  // weight so far + exact remaining cost
  Weight weight;    // weight so far
  uint64_t order;
  StateId state;    // kNoState marks "already past the final weight"
  uint32_t prefix;
};

struct EntryAfter {
  bool operator()(const SearchEntry &x, const SearchEntry &y) const {
    if (x.priority != y.priority) return x.priority > y.priority;
    return x.order > y.order;
  }
};

}  // namespace

std::vector<WeightedString> NBestUniqueStrings(const Fst &fst, size_t n,
                                               const NBestOptions &opts) {
  std::vector<WeightedString> results;
  if (fst.Empty() || n == 0) return results;
  const std::vector<Weight> remaining = ShortestDistanceToFinal(fst);
  if (remaining[fst.Start()] == kInfinity) return results;

  // A* over (state, output prefix) with an exact heuristic: entries pop in
  // order of the cheapest complete string they can still produce. A pair
  // popped a second time can only repeat strings found from its first pop,
  // so it is dropped.
  PrefixTrie trie;
  std::priority_queue<SearchEntry, std::vector<SearchEntry>, EntryAfter> heap;
  std::unordered_set<uint64_t> popped;
  const uint64_t done_state = fst.NumStates();
  auto key_of = [done_state](StateId s, uint32_t prefix) {
    uint64_t state = s == kNoState ? done_state : static_cast<uint64_t>(s);
    return (static_cast<uint64_t>(prefix) << 32) ^ state;
  };
  uint64_t order = 0;
  heap.push({remaining[fst.Start()], 0.0, order++, fst.Start(), 0});
  size_t expansions = 0;
  while (!heap.empty() && results.size() < n) {
    SearchEntry entry = heap.top();
    heap.pop();
    if (!popped.insert(key_of(entry.state, entry.prefix)).second) continue;
    if (++expansions > opts.max_expansions)
      throw Error(ErrorKind::kResource, "n-best search exceeded the expansion cap of " +
                                            std::to_string(opts.max_expansions));
    if (entry.state == kNoState) {
      results.push_back({trie.Labels(entry.prefix), entry.weight});
      continue;
    }
    if (fst.IsFinal(entry.state)) {
      Weight total = entry.weight + fst.Final(entry.state);
      if (!popped.count(key_of(kNoState, entry.prefix)))
        heap.push({total, total, order++, kNoState, entry.prefix});
    }
    for (const auto &arc : fst.Arcs(entry.state)) {
      Weight rest = remaining[arc.nextstate];
      if (rest == kInfinity) continue;
      uint32_t prefix =
          arc.olabel == kEpsilon ? entry.prefix : trie.Child(entry.prefix, arc.olabel);
      if (popped.count(key_of(arc.nextstate, prefix))) continue;
      Weight weight = entry.weight + arc.weight;
      heap.push({weight + rest, weight, order++, arc.nextstate, prefix});
    }
  }
  return results;
}

Fst EosAugment(const Fst &decode_graph, Weight eos_cost) {
  if (eos_cost < 0.0) throw Error(ErrorKind::kContract, "EOS cost must be nonnegative");
  auto eos = decode_graph.InputSymbols()->Find(kEosSymbol);
  if (!eos)
    throw Error(ErrorKind::kSymbol, "decode graph input symbols lack " +
                                        std::string(kEosSymbol));
  // A loop on each final state would also accept <eos> at inner word
  // boundaries, so absorption goes through one sink that only loops.
  Fst augmented = decode_graph;
  const size_t num_states = augmented.NumStates();
  StateId sink = augmented.AddState();
  augmented.SetFinal(sink, 0.0);
  augmented.AddArc(sink, {*eos, kEpsilon, eos_cost, sink});
  for (StateId s = 0; static_cast<size_t>(s) < num_states; ++s)
    if (augmented.IsFinal(s))
      augmented.AddArc(s, {*eos, kEpsilon, eos_cost + augmented.Final(s), sink});
  augmented.SortArcsByInput();
  return augmented;
}

}  // namespace phonsim
