// tests/simulate_test.cc

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

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "doctest.h"
#include "phonsim/builders.h"
#include "phonsim/error.h"
#include "phonsim/jsonl_io.h"
#include "phonsim/simulate.h"
#include "test_util.h"

namespace phonsim {

namespace {

// CAT/CUT toy channel: ae -> ae 0.8, ae -> ah 0.2.
struct CatCut {
  const PhoneInventory &inv = test::Arpabet();
  Lexicon lex;
  ArpaModel lm;
  ConfusionMatrix cm;
  std::unique_ptr<DecodingContext> ctx;

  CatCut() {
    lex.Add("cat", inv.ParsePhones("k ae t"));
    lex.Add("cut", inv.ParsePhones("k ah t"));
    lm = test::UniformUnigram(lex);
    Label ae = inv.PhoneLabel("ae"), ah = inv.PhoneLabel("ah");
    cm = ConfusionMatrix::FromProbabilities({{ae, {{PhoneSeq{ae}, 0.8}, {PhoneSeq{ah}, 0.2}}}},
                                            inv);
    ctx = std::make_unique<DecodingContext>(inv, lex, lm);
  }
};

std::vector<std::string> Texts(const NBestList &list) {
  std::vector<std::string> out;
  for (const auto &e : list.entries) {
    std::string s;
    for (const auto &w : e.words) s += (s.empty() ? "" : " ") + w;
    out.push_back(s);
  }
  return out;
}

// One-hot steps echoing the phones, then `trailing_eos` <eos> steps.
class EchoProvider : public DistributionProvider {
 public:
  EchoProvider(const PhoneInventory &inv, size_t trailing_eos)
      : inv_(inv), trailing_eos_(trailing_eos) {}
  std::optional<StepDistributions> Next(const std::string &id, std::span<const Label> phones,
                                        std::span<const Cue>) override {
    StepDistributions d{id, {}};
    for (Label p : phones) d.steps.push_back({{p, 1.0}});
    for (size_t i = 0; i < trailing_eos_; ++i) d.steps.push_back({{inv_.eos(), 1.0}});
    return d;
  }

 private:
  const PhoneInventory &inv_;
  size_t trailing_eos_;
};

// Turns ae into eh only right after r, and only when the cue asks for a
// mutation.
class ContextProvider : public DistributionProvider {
 public:
  explicit ContextProvider(const PhoneInventory &inv) : inv_(inv) {}
  std::optional<StepDistributions> Next(const std::string &id, std::span<const Label> phones,
                                        std::span<const Cue> cues) override {
    StepDistributions d{id, {}};
    Label ae = inv_.PhoneLabel("ae"), eh = inv_.PhoneLabel("eh"), r = inv_.PhoneLabel("r");
    for (size_t i = 0; i < phones.size(); ++i) {
      bool after_r = i > 0 && phones[i - 1] == r;
      if (phones[i] == ae && after_r && cues[i] == Cue::kMutation)
        d.steps.push_back({{eh, 0.9}, {ae, 0.1}});
      else
        d.steps.push_back({{phones[i], 1.0}});
    }
    d.steps.push_back({{inv_.eos(), 1.0}});
    return d;
  }

 private:
  const PhoneInventory &inv_;
};

}  // namespace

TEST_CASE("direct decoding") {
  CatCut toy;
  Fst c = BuildConfusionFst(toy.cm, toy.inv);
  auto list = DirectDecode({"cat"}, *toy.ctx, c, 2);
  CHECK(Texts(list) == std::vector<std::string>{"cat", "cut"});
  CHECK(list.entries[0].score < list.entries[1].score);
  CHECK(list.entries[1].score - list.entries[0].score == doctest::Approx(std::log(4.0)));
  CHECK(DirectDecode({"cat"}, *toy.ctx, c, 100).entries.size() == 2);

  Fst identity = BuildConfusionFst(ConfusionMatrix::Identity(toy.inv), toy.inv);
  CHECK(Texts(DirectDecode({"cut", "cat"}, *toy.ctx, identity, 10)) ==
        std::vector<std::string>{"cut cat"});

  try {
    DirectDecode({"dog"}, *toy.ctx, c, 2);
    FAIL("expected missing word");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::kMissingWord);
  }

  SUBCASE("channel output outside the lexicon gives an empty flagged list") {
    Label ae = toy.inv.PhoneLabel("ae"), iy = toy.inv.PhoneLabel("iy");
    auto only_iy = ConfusionMatrix::FromProbabilities({{ae, {{PhoneSeq{iy}, 1.0}}}}, toy.inv);
    auto empty = DirectDecode({"cat"}, *toy.ctx, BuildConfusionFst(only_iy, toy.inv), 5);
    CHECK(empty.entries.empty());
    CHECK(empty.empty_composition);
  }
}

TEST_CASE("sample alternatives") {
  const auto &inv = test::Arpabet();
  Label s = inv.PhoneLabel("s"), z = inv.PhoneLabel("z"), th = inv.PhoneLabel("th");
  auto cm = ConfusionMatrix::FromProbabilities(
      {{s, {{PhoneSeq{s}, 0.9}, {PhoneSeq{z}, 0.07}, {PhoneSeq{th}, 0.03}}}}, inv);
  const auto &row = cm.Row(s);

  Rng rng(31);
  bool saw_z_th = false;
  for (int i = 0; i < 20000 && !saw_z_th; ++i) {
    auto opts = SampleAlternatives(row, rng);
    REQUIRE(opts.size() == 2);
    CHECK(opts[0].output != opts[1].output);
    CHECK(opts[0].weight + opts[1].weight == doctest::Approx(1.0).epsilon(1e-12));
    if (opts[0].output == PhoneSeq{z} && opts[1].output == PhoneSeq{th}) {
      saw_z_th = true;
      CHECK(std::abs(opts[0].weight - 0.9278) < 1e-4);
      CHECK(std::abs(opts[1].weight - 0.0722) < 1e-4);
    }
  }
  CHECK(saw_z_th);

  Label x = inv.PhoneLabel("k");
  auto single = ConfusionMatrix::Identity(inv);
  auto one = SampleAlternatives(single.Row(x), rng);
  REQUIRE(one.size() == 1);
  CHECK(one[0].output == PhoneSeq{x});
  CHECK(one[0].weight == 1.0);

  SUBCASE("first-draw frequencies follow the row") {
    const int trials = 100000;
    std::map<PhoneSeq, int> counts;
    Rng law(2);
    for (int i = 0; i < trials; ++i) ++counts[SampleAlternatives(row, law)[0].output];
    for (const auto &alt : row) {
      double sigma = std::sqrt(trials * alt.prob * (1 - alt.prob));
      CHECK(std::abs(counts[alt.output] - trials * alt.prob) <= 3 * sigma);
    }
  }
}

TEST_CASE("sampled lattices are normalized per position") {
  const auto &inv = test::Arpabet();
  Rng build(17);
  // A random matrix with up to 5 alternatives per row.
  std::map<Label, std::vector<std::pair<PhoneSeq, double>>> probs;
  for (Label p : inv.Phones()) {
    size_t n = 1 + build.UniformIndex(5);
    std::vector<double> w(n);
    for (auto &x : w) x = 0.05 + build.Uniform01();
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::set<PhoneSeq> used;
    for (size_t i = 0; i < n; ++i) {
      PhoneSeq out;
      if (i == 0) out = {p};
      else if (i == 1) out = {};
      else out = {static_cast<Label>(1 + build.UniformIndex(inv.NumPhones()))};
      if (!used.insert(out).second) continue;
      probs[p].push_back({out, w[i] / total});
    }
    double kept = 0;
    for (auto &[o, q] : probs[p]) kept += q;
    for (auto &[o, q] : probs[p]) q /= kept;
  }
  auto cm = ConfusionMatrix::FromProbabilities(probs, inv);
  cm.Validate(inv);
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    PhoneSeq phones;
    for (size_t i = 0, n = 1 + rng.UniformIndex(10); i < n; ++i)
      phones.push_back(1 + rng.UniformIndex(inv.NumPhones()));
    auto lattice = BuildSampledLattice(phones, cm, inv, rng);
    REQUIRE(lattice.positions.size() == phones.size());
    for (const auto &pos : lattice.positions) {
      double total = 0;
      for (const auto &o : pos) total += o.weight;
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
    lattice.fst.Validate();
  }
}

TEST_CASE("sampled decoding") {
  CatCut toy;
  SUBCASE("ranking by frequency") {
    Rng rng(123);
    auto list = SampledDecode({"cat"}, *toy.ctx, toy.cm, {200, 100}, rng);
    REQUIRE(list.entries.size() == 2);
    CHECK(Texts(list) == std::vector<std::string>{"cat", "cut"});
    CHECK(list.entries[0].freq > list.entries[1].freq);
    CHECK(list.entries[0].freq + list.entries[1].freq == 200);
    CHECK(list.iterations == 200);
  }
  SUBCASE("identity channel reproduces the input every time") {
    Rng rng(1);
    auto list = SampledDecode({"cut", "cat", "cat"}, *toy.ctx, ConfusionMatrix::Identity(toy.inv),
                              {50, 100}, rng);
    REQUIRE(list.entries.size() == 1);
    CHECK(Texts(list)[0] == "cut cat cat");
    CHECK(list.entries[0].freq == 50);
  }
  SUBCASE("single iteration") {
    Rng rng(9);
    CHECK(SampledDecode({"cat"}, *toy.ctx, toy.cm, {1, 100}, rng).entries.size() == 1);
  }
  SUBCASE("reproducible per seed") {
    Rng a(77), b(77);
    auto la = SampledDecode({"cat", "cut"}, *toy.ctx, toy.cm, {40, 100}, a);
    auto lb = SampledDecode({"cat", "cut"}, *toy.ctx, toy.cm, {40, 100}, b);
    CHECK(Texts(la) == Texts(lb));
    for (size_t i = 0; i < la.entries.size(); ++i) CHECK(la.entries[i].freq == lb.entries[i].freq);
  }
}

TEST_CASE("temperature top-k") {
  const auto &inv = test::Arpabet();
  Label a = inv.PhoneLabel("aa"), b = inv.PhoneLabel("b"), c = inv.PhoneLabel("ch");
  std::vector<std::pair<Label, double>> step{{a, 0.7}, {b, 0.2}, {c, 0.1}};
  auto hot = TemperatureTopK(step, {3, 10.0});
  REQUIRE(hot.size() == 3);
  // Independent closed form: p^(1/tau) renormalized.
  double z = std::pow(0.7, 0.1) + std::pow(0.2, 0.1) + std::pow(0.1, 0.1);
  CHECK(hot[0].first == a);
  CHECK(std::abs(hot[0].second - std::pow(0.7, 0.1) / z) < 1e-12);
  CHECK(std::abs(hot[0].second - 0.3696) < 1e-4);
  CHECK(std::abs(hot[1].second - 0.3261) < 1e-4);
  CHECK(std::abs(hot[2].second - 0.3043) < 1e-4);

  auto cold = TemperatureTopK(step, {3, 1.0});
  CHECK(cold[0].second == doctest::Approx(0.7));
  CHECK(cold[2].second == doctest::Approx(0.1));
  auto entropy = [](const std::vector<std::pair<Label, double>> &d) {
    double h = 0;
    for (const auto &[l, p] : d) h -= p * std::log(p);
    return h;
  };
  CHECK(entropy(hot) > entropy(cold));

  SUBCASE("fewer nonzero symbols than k") {
    std::vector<std::pair<Label, double>> two{{a, 0.6}, {b, 0.4}, {c, 0.0}};
    auto out = TemperatureTopK(two, {3, 10.0});
    CHECK(out.size() == 2);
  }
  SUBCASE("pre-log scores") {
    std::vector<std::pair<Label, double>> logs{{a, std::log(0.7)}, {b, std::log(0.2)},
                                               {c, std::log(0.1)}};
    auto out = TemperatureTopK(logs, {3, 10.0, true});
    CHECK(out[1].second == doctest::Approx(hot[1].second));
  }
  SUBCASE("softmax over every symbol before selection") {
    std::vector<std::pair<Label, double>> four{{a, 0.5}, {b, 0.3}, {c, 0.15}, {1, 0.05}};
    auto all = TemperatureTopK(four, {3, 10.0, false, SoftmaxScope::kAll});
    auto sel = TemperatureTopK(four, {3, 10.0});
    REQUIRE(all.size() == 3);
    // Global softmax values, so the kept mass falls short of 1 by the
    // dropped symbol's share; ratios match the selected-scope lattice.
    double z4 = 0;
    for (const auto &[l, p] : four) z4 += std::pow(p, 0.1);
    double total = 0;
    for (size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(all[i].second - std::pow(four[i].second, 0.1) / z4) < 1e-12);
      CHECK(all[i].second / all[0].second == doctest::Approx(sel[i].second / sel[0].second));
      total += all[i].second;
    }
    CHECK(std::abs(total + std::pow(0.05, 0.1) / z4 - 1.0) < 1e-12);
    CHECK(all[0].first == sel[0].first);
  }
}

TEST_CASE("distribution lattices on random steps") {
  const auto &inv = test::Arpabet();
  Rng rng(606);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<Label, double>> step;
    size_t n = 1 + rng.UniformIndex(8);
    double total = 0;
    std::set<Label> used;
    for (size_t i = 0; i < n; ++i) {
      Label l = 1 + rng.UniformIndex(inv.NumPhones());
      if (!used.insert(l).second) continue;
      double w = rng.Uniform01() + 1e-3;
      step.push_back({l, w});
      total += w;
    }
    for (auto &[l, p] : step) p /= total;
    auto argmax = *std::max_element(step.begin(), step.end(), [](auto &x, auto &y) {
      return x.second < y.second || (x.second == y.second && x.first > y.first);
    });
    double tau = 0.2 + 20 * rng.Uniform01();
    auto out = TemperatureTopK(step, {3, tau});
    double sum = 0;
    for (const auto &[l, p] : out) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-9);
    CHECK(out[0].first == argmax.first);
    auto global = TemperatureTopK(step, {3, tau, false, SoftmaxScope::kAll});
    double kept = 0;
    for (const auto &[l, p] : global) kept += p;
    CHECK(kept <= 1.0 + 1e-12);
    CHECK(global[0].first == argmax.first);
    StepDistributions dists{"u", {step, step}};
    Fst f = DistributionsToFst(dists, inv.symbols(), {3, tau});
    for (StateId s = 0; s + 1 < static_cast<StateId>(f.NumStates()); ++s) {
      double mass = 0;
      for (const Arc &arc : f.Arcs(s)) mass += std::exp(-arc.weight);
      CHECK(std::abs(mass - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("step distribution validation and IO") {
  const auto &inv = test::Arpabet();
  StepDistributions bad{"u", {{{1, 0.5}, {2, 0.4}}}};
  CHECK_THROWS_AS(ValidateStepDistributions(bad), Error);
  CHECK_THROWS_AS(ValidateStepDistributions(StepDistributions{"u", {}}), Error);

  StepDistributions good{"u1", {{{inv.PhoneLabel("k"), 0.75}, {inv.PhoneLabel("g"), 0.25}},
                                {{inv.eos(), 1.0}}}};
  std::stringstream ss;
  WriteStepDistributions(ss, good, inv);
  auto back = ReadStepDistributions(ss, "d", inv);
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == "u1");
  CHECK(back[0].steps == good.steps);

  std::istringstream unknown(R"({"id": "u", "steps": [[["qq", 1.0]]]})" "\n");
  CHECK_THROWS_AS(ReadStepDistributions(unknown, "d", inv), Error);
}

TEST_CASE("cue sampling") {
  const auto &inv = test::Arpabet();
  CollapsedErrorMatrix collapsed;
  Label s = inv.PhoneLabel("s"), k = inv.PhoneLabel("k");
  collapsed.rows()[s] = {0.5, 0.2, 0.15, 0.1, 0.05};
  collapsed.rows()[k] = {1.0, 0, 0, 0, 0};
  Rng rng(4);
  PhoneSeq ks(40, k);
  auto cues = SampleCues(collapsed, ks, rng);
  CHECK(cues.size() == 40);
  for (Cue c : cues) CHECK(c == Cue::kNoError);

  const int trials = 100000;
  std::array<int, kNumCues> counts{};
  PhoneSeq one{s};
  for (int i = 0; i < trials; ++i) ++counts[static_cast<size_t>(SampleCues(collapsed, one, rng)[0])];
  for (size_t c = 0; c < kNumCues; ++c) {
    double p = collapsed.Row(s)[c];
    CHECK(std::abs(counts[c] - trials * p) <= 3 * std::sqrt(trials * p * (1 - p)));
  }
}

TEST_CASE("seq2seq decoding") {
  CatCut toy;
  CollapsedErrorMatrix collapsed = CollapseErrorTypes(toy.cm);
  Seq2SeqOptions opts;
  opts.k = 5;
  opts.max_iterations = 3;

  SUBCASE("echo provider with trailing end-of-sequence steps") {
    EchoProvider echo(toy.inv, 2);
    Rng rng(1);
    auto list = Seq2SeqDecode("u", {"cat", "cut"}, echo, *toy.ctx, collapsed, opts, rng);
    REQUIRE(!list.entries.empty());
    CHECK(Texts(list)[0] == "cat cut");
    CHECK(list.entries[0].freq == 3);

    Seq2SeqOptions plain = opts;
    plain.absorb_eos = false;
    auto none = Seq2SeqDecode("u", {"cat", "cut"}, echo, *toy.ctx, collapsed, plain, rng);
    CHECK(none.entries.empty());
    CHECK(none.empty_composition);
    CHECK(none.skipped_iterations == 3);
  }
  SUBCASE("sampled mode keeps the one-hot input") {
    EchoProvider echo(toy.inv, 1);
    Rng rng(2);
    opts.mode = Seq2SeqMode::kSampled;
    CHECK(Texts(Seq2SeqDecode("u", {"cut"}, echo, *toy.ctx, collapsed, opts, rng))[0] == "cut");
  }
  SUBCASE("provider failures name the cues") {
    struct Failing : DistributionProvider {
      std::optional<StepDistributions> Next(const std::string &, std::span<const Label>,
                                            std::span<const Cue>) override {
        throw std::runtime_error("backend down");
      }
    } failing;
    Rng rng(3);
    try {
      Seq2SeqDecode("u", {"cat"}, failing, *toy.ctx, collapsed, opts, rng);
      FAIL("expected provider error");
    } catch (const Error &e) {
      CHECK(e.kind() == ErrorKind::kProvider);
      CHECK(std::string(e.what()).find("cues [") != std::string::npos);
      CHECK(std::string(e.what()).find("backend down") != std::string::npos);
    }
  }
  SUBCASE("k below the per-sample list size is rejected") {
    EchoProvider echo(toy.inv, 0);
    Rng rng(3);
    opts.k = 4;
    CHECK_THROWS_AS(Seq2SeqDecode("u", {"cat"}, echo, *toy.ctx, collapsed, opts, rng), Error);
  }
}

TEST_CASE("context-dependent provider errors stay in context") {
  const auto &inv = test::Arpabet();
  Lexicon lex;
  lex.Add("ran", inv.ParsePhones("r ae n"));
  lex.Add("ren", inv.ParsePhones("r eh n"));
  lex.Add("tan", inv.ParsePhones("t ae n"));
  lex.Add("ten", inv.ParsePhones("t eh n"));
  auto lm = test::UniformUnigram(lex);
  DecodingContext ctx(inv, lex, lm);
  Label ae = inv.PhoneLabel("ae"), eh = inv.PhoneLabel("eh");
  auto cm = ConfusionMatrix::FromProbabilities({{ae, {{PhoneSeq{ae}, 0.6}, {PhoneSeq{eh}, 0.4}}}},
                                               inv);
  CollapsedErrorMatrix collapsed = CollapseErrorTypes(cm);
  ContextProvider provider(inv);
  Seq2SeqOptions opts;
  opts.k = 20;
  opts.max_iterations = 40;
  Rng rng(10);
  auto texts = Texts(Seq2SeqDecode("u", {"ran", "tan"}, provider, ctx, collapsed, opts, rng));
  CHECK(std::find(texts.begin(), texts.end(), "ren tan") != texts.end());
  for (const auto &t : texts) CHECK(t.find("ten") == std::string::npos);

  // The plain matrix spreads the same error to both contexts.
  Rng srng(10);
  auto sampled = Texts(SampledDecode({"ran", "tan"}, ctx, cm, {200, 100}, srng));
  bool ten = false;
  for (const auto &t : sampled) ten |= t.find("ten") != std::string::npos;
  CHECK(ten);
}

TEST_CASE("merging two lists") {
  auto list = [](std::initializer_list<const char *> words) {
    NBestList l;
    for (const char *w : words) l.entries.push_back({{w}, 0.0, 0});
    return l;
  };
  CHECK(Texts(MergeKBest(list({"x", "y"}), list({"y", "z"}), 4)) ==
        std::vector<std::string>{"x", "y", "z"});
  CHECK(Texts(MergeKBest(list({"a", "b", "c"}), list({"d", "e", "f"}), 4)) ==
        std::vector<std::string>{"a", "b", "d", "e"});
  CHECK(Texts(MergeKBest(list({"a", "b", "c"}), list({"a", "b", "c"}), 4)) ==
        std::vector<std::string>{"a", "b", "c"});
  CHECK(Texts(MergeKBest(list({"a"}), list({"d", "e", "f"}), 4)) ==
        std::vector<std::string>{"a", "d", "e", "f"});
  CHECK_THROWS_AS(MergeKBest(list({"a"}), list({"b"}), 3), Error);

  NBestList a, b;
  for (int i = 0; i < 50; ++i) {
    a.entries.push_back({{"a" + std::to_string(i)}, 0.0, 0});
    b.entries.push_back({{"b" + std::to_string(i)}, 0.0, 0});
  }
  auto merged = MergeKBest(a, b, 100);
  REQUIRE(merged.entries.size() == 100);
  for (int i = 0; i < 50; ++i) CHECK(merged.entries[i].words == a.entries[i].words);
}

TEST_CASE("n-best lines") {
  NBestList list;
  list.entries.push_back({{"the", "cat"}, 1.25, 3});
  std::stringstream ss;
  WriteNBestLine(ss, "u1", list);
  NBestList empty;
  empty.empty_composition = true;
  WriteNBestLine(ss, "u2", empty);
  auto back = ReadPredictions(ss, "p");
  REQUIRE(back.size() == 2);
  CHECK(back["u1"] == std::vector<WordSeq>{{"the", "cat"}});
  CHECK(back["u2"].empty());
}

}  // namespace phonsim
