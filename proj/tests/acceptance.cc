// tests/acceptance.cc

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

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any of them fails. All tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "oracles.h"
#include "phonsim/align.h"
#include "phonsim/builders.h"
#include "phonsim/confusion_matrix.h"
#include "phonsim/error.h"
#include "phonsim/eval.h"
#include "phonsim/fst_ops.h"
#include "phonsim/jsonl_io.h"
#include "phonsim/simulate.h"
#include "phonsim/synthetic.h"
#include "phonsim/text_util.h"
#include "test_util.h"

namespace phonsim {
namespace {

namespace fs = std::filesystem;

const double kSynthMaxSeconds = 300.0;
const double kUtteranceRecallFloor = 50.0;
const double kExactTol = 1e-9;
const double kSumTol = 1e-9;
const double kTempTol = 1e-4;
const double kSmoothTol = 1e-12;
const double kReweightTol = 1e-4;
const double kSigmas = 3.0;
const int kLawTrials = 100000;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

int Cli(std::vector<std::string> args, std::string *err_text = nullptr) {
  args.insert(args.begin(), "phonsim");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string Slurp(const std::string &path) {
  std::ifstream is(path);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

fs::path ScratchDir(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("phonsim_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1. Sampled beats direct on chunk recall for a known synthetic channel.
Outcome SyntheticChannel() {
  auto start = std::chrono::steady_clock::now();
  fs::path dir = ScratchDir("synth");
  auto p = [&](const char *name) { return (dir / name).string(); };
  std::string err;
  if (Cli({"synth", "--out", p("data"), "--train-sentences", "400"}, &err) != 0)
    return {false, "synth failed: " + err};
  std::string data = p("data");
  if (Cli({"train-confmat", "--corpus", data + "/train.tsv", "--lexicon", data + "/lexicon.txt",
           "--out", p("cm.txt")}, &err) != 0)
    return {false, "train-confmat failed: " + err};
  std::map<std::string, nlohmann::json> reports;
  for (std::string mode : {"direct", "sampled"}) {
    if (Cli({"simulate", "--mode", mode, "--k", "100", "--input", data + "/test.tsv",
             "--lexicon", data + "/lexicon.txt", "--lm", data + "/lm.arpa", "--matrix",
             p("cm.txt"), "--out", p("sim.jsonl")}, &err) != 0)
      return {false, mode + " simulate failed: " + err};
    if (Cli({"evaluate", "--k", "100", "--corpus", data + "/test.tsv", "--predictions",
             p("sim.jsonl"), "--out", p("report.json")}, &err) != 0)
      return {false, "evaluate failed: " + err};
    reports[mode] = nlohmann::json::parse(Slurp(p("report.json")));
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  fs::remove_all(dir);
  double dc = reports["direct"]["chunk_recall"], sc = reports["sampled"]["chunk_recall"];
  double du = reports["direct"]["utterance_recall"], su = reports["sampled"]["utterance_recall"];
  size_t lexicon_words = 0;
  {
    lexicon_words = GenerateSyntheticCorpus(test::Arpabet()).lexicon.NumWords();
  }
  bool pass = sc > dc && du > kUtteranceRecallFloor && su > kUtteranceRecallFloor &&
              seconds <= kSynthMaxSeconds;
  return {pass, "lexicon " + std::to_string(lexicon_words) + " words; chunk recall@100 direct " +
                    Fmt(dc, 2) + " sampled " + Fmt(sc, 2) + "; utterance recall@100 direct " +
                    Fmt(du, 2) + " sampled " + Fmt(su, 2) + "; " + Fmt(seconds, 1) + " s"};
}

// 2. Chunks of the medications sentence.
Outcome WorkedExample() {
  auto chunks = ExtractErrorChunks(
      NormalizeWords("do you take any other medications except for the tylenol for pain", false),
      NormalizeWords("you take any other medicine cations except for the tylenol for pain", false));
  std::set<std::pair<WordSeq, WordSeq>> got, want{{{"medications"}, {"medicine", "cations"}},
                                                  {{"do"}, {}}};
  for (const auto &c : chunks) got.insert({c.ref_span, c.hyp_span});
  std::string text;
  for (const auto &c : chunks) {
    std::string r, h;
    for (const auto &w : c.ref_span) r += (r.empty() ? "" : " ") + w;
    for (const auto &w : c.hyp_span) h += (h.empty() ? "" : " ") + w;
    text += "{" + r + " : " + h + "} ";
  }
  return {chunks.size() == 2 && got == want, text};
}

// 3. Alignment, n-best and composition against brute-force oracles.
Outcome Oracles() {
  auto inv = oracle::SmallInventory();
  size_t align_pairs = 0, align_bad = 0;
  auto check_pair = [&](const PhoneSeq &ref, const PhoneSeq &hyp) {
    ++align_pairs;
    double got = AlignPhones(ref, hyp, inv).cost;
    if (std::abs(got - oracle::BruteForceAlignCost(ref, hyp, inv, 0.7)) > kExactTol) ++align_bad;
  };
  auto seqs = oracle::AllSequences(inv.Phones(), 0, 4);
  for (const auto &ref : seqs)
    if (!ref.empty())
      for (const auto &hyp : seqs) check_pair(ref, hyp);
  // Longer pairs by sampling: the exhaustive product is out of reach.
  Rng rng(1);
  for (int i = 0; i < 3000; ++i) {
    PhoneSeq ref, hyp;
    size_t n = 5 + rng.UniformIndex(2), m = rng.UniformIndex(7);
    for (size_t j = 0; j < n; ++j) ref.push_back(1 + rng.UniformIndex(5));
    for (size_t j = 0; j < m; ++j) hyp.push_back(1 + rng.UniformIndex(5));
    check_pair(ref, hyp);
    check_pair(hyp.empty() ? ref : hyp, ref);
  }

  auto syms = oracle::LetterSymbols(3);
  size_t nbest_bad = 0;
  for (int t = 0; t < 100; ++t) {
    Fst f = oracle::RandomAcyclic(syms, 7, 3, 200, rng);
    auto truth = oracle::EnumerateOutputStrings(f);
    std::vector<double> weights;
    for (const auto &[s, w] : truth) weights.push_back(w);
    std::sort(weights.begin(), weights.end());
    size_t n = 1 + rng.UniformIndex(truth.size() + 1);
    auto got = NBestUniqueStrings(f, n);
    bool ok = got.size() == std::min(n, truth.size());
    std::set<std::vector<Label>> seen;
    for (size_t i = 0; ok && i < got.size(); ++i)
      ok = seen.insert(got[i].labels).second && truth.count(got[i].labels) &&
           std::abs(truth.at(got[i].labels) - got[i].weight) < kExactTol &&
           std::abs(weights[i] - got[i].weight) < kExactTol;
    nbest_bad += !ok;
  }

  size_t compose_bad = 0;
  for (int t = 0; t < 50; ++t) {
    Fst a = oracle::RandomTransducer(syms, 4, 3, rng);
    Fst b = oracle::RandomTransducer(syms, 4, 3, rng);
    auto ra = oracle::EnumerateRelation(a, 5);
    size_t max_mid = 0;
    for (const auto &[pair, w] : ra) max_mid = std::max(max_mid, pair.second.size());
    auto expected = oracle::ComposeRelations(ra, oracle::EnumerateRelation(b, max_mid));
    auto actual = oracle::EnumerateRelation(Compose(a, b), 5);
    bool ok = actual.size() == expected.size();
    for (const auto &[pair, w] : expected) {
      auto it = actual.find(pair);
      ok = ok && it != actual.end() && std::abs(it->second - w) < kExactTol;
    }
    compose_bad += !ok;
  }
  return {align_bad == 0 && nbest_bad == 0 && compose_bad == 0,
          "align " + std::to_string(align_bad) + "/" + std::to_string(align_pairs) +
              " mismatches (exhaustive to length 4, sampled 5-6); nbest " +
              std::to_string(nbest_bad) + "/100; compose " + std::to_string(compose_bad) + "/50"};
}

// 4. Every distribution the library produces sums to one.
Outcome DistributionValidity() {
  const auto &inv = test::Arpabet();
  Rng rng(4);
  double worst = 0.0;
  size_t checked = 0;
  auto note = [&](double total) {
    worst = std::max(worst, std::abs(total - 1.0));
    ++checked;
  };
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Alignment> als;
    for (int u = 0; u < 20; ++u) {
      PhoneSeq ref, hyp;
      for (size_t i = 0, n = 1 + rng.UniformIndex(8); i < n; ++i)
        ref.push_back(1 + rng.UniformIndex(12));
      for (size_t i = 0, n = rng.UniformIndex(10); i < n; ++i)
        hyp.push_back(1 + rng.UniformIndex(12));
      als.push_back(AlignPhones(ref, hyp, inv));
    }
    auto cm = EstimateConfusionMatrix(als, inv, {trial % 3 == 0 ? 0.5 : 0.0});
    for (const auto &[phone, row] : cm.rows()) {
      double total = 0;
      for (const auto &alt : row) total += alt.prob;
      note(total);
    }
    auto collapsed = CollapseErrorTypes(cm);
    for (const auto &[phone, row] : collapsed.rows())
      note(std::accumulate(row.begin(), row.end(), 0.0));
    for (double beta : {0.0, 0.8, 1.0})
      for (Label y : inv.Phones()) note(SmoothTargets(y, cm, beta).Total());
    for (int l = 0; l < 10; ++l) {
      PhoneSeq phones;
      for (size_t i = 0, n = 1 + rng.UniformIndex(10); i < n; ++i)
        phones.push_back(1 + rng.UniformIndex(inv.NumPhones()));
      for (const auto &pos : BuildSampledLattice(phones, cm, inv, rng).positions) {
        double total = 0;
        for (const auto &o : pos) total += o.weight;
        note(total);
      }
    }
  }
  for (int trial = 0; trial < 300; ++trial) {
    StepDistributions d{"u", {}};
    for (size_t s = 0, n = 1 + rng.UniformIndex(6); s < n; ++s) {
      std::vector<std::pair<Label, double>> step;
      double total = 0;
      for (size_t i = 0, k = 1 + rng.UniformIndex(6); i < k; ++i) {
        Label l = static_cast<Label>(1 + i + rng.UniformIndex(3) * 6);
        double w = rng.Uniform01() + 1e-3;
        step.push_back({l, w});
        total += w;
      }
      for (auto &[l, p] : step) p /= total;
      d.steps.push_back(step);
    }
    LatticeOptions opts{1 + rng.UniformIndex(4), 0.5 + 15 * rng.Uniform01()};
    Fst f = DistributionsToFst(d, inv.symbols(), opts);
    for (StateId s = 0; s + 1 < static_cast<StateId>(f.NumStates()); ++s) {
      double mass = 0;
      for (const Arc &arc : f.Arcs(s)) mass += std::exp(-arc.weight);
      note(mass);
    }
  }
  return {worst <= kSumTol,
          std::to_string(checked) + " distributions, max |sum - 1| = " + Fmt(worst, 17)};
}

// 5. Temperature softmax on {0.7, 0.2, 0.1}.
Outcome Temperature() {
  std::vector<std::pair<Label, double>> step{{1, 0.7}, {2, 0.2}, {3, 0.1}};
  auto hot = TemperatureTopK(step, {3, 10.0});
  auto cold = TemperatureTopK(step, {3, 1.0});
  auto entropy = [](const std::vector<std::pair<Label, double>> &d) {
    double h = 0;
    for (const auto &[l, p] : d) h -= p * std::log(p);
    return h;
  };
  const double want[] = {0.3696, 0.3261, 0.3043};
  bool ok = hot.size() == 3;
  for (size_t i = 0; ok && i < 3; ++i)
    ok = hot[i].first == static_cast<Label>(i + 1) && std::abs(hot[i].second - want[i]) <= kTempTol;
  ok = ok && entropy(hot) > entropy(cold) && hot[0].first == 1 && cold[0].first == 1;
  return {ok, "P = (" + Fmt(hot[0].second) + ", " + Fmt(hot[1].second) + ", " +
                  Fmt(hot[2].second) + "); H(tau=10) " + Fmt(entropy(hot)) + " > H(tau=1) " +
                  Fmt(entropy(cold))};
}

// 6. Target smoothing.
Outcome Smoothing() {
  const auto &inv = test::Arpabet();
  Label s = inv.PhoneLabel("s"), z = inv.PhoneLabel("z");
  auto cm = ConfusionMatrix::FromProbabilities({{s, {{PhoneSeq{s}, 0.8}, {PhoneSeq{z}, 0.2}}}},
                                               inv);
  auto t = SmoothTargets(s, cm, 0.8);
  auto one = SmoothTargets(s, cm, 1.0);
  bool ok = std::abs(t.ProbOf(s) - 0.96) <= kSmoothTol && std::abs(t.ProbOf(z) - 0.04) <= kSmoothTol &&
            one.ProbOf(s) == 1.0 && one.ProbOf(z) == 0.0;
  return {ok, "beta 0.8 -> (" + Fmt(t.ProbOf(s), 15) + ", " + Fmt(t.ProbOf(z), 15) +
                  "); beta 1 -> (" + Fmt(one.ProbOf(s), 1) + ", " + Fmt(one.ProbOf(z), 1) + ")"};
}

// 7. First-draw law and the rank reweighting rule.
Outcome SamplingLaw() {
  const auto &inv = test::Arpabet();
  Label s = inv.PhoneLabel("s"), z = inv.PhoneLabel("z"), th = inv.PhoneLabel("th");
  auto cm = ConfusionMatrix::FromProbabilities(
      {{s, {{PhoneSeq{s}, 0.9}, {PhoneSeq{z}, 0.07}, {PhoneSeq{th}, 0.03}}}}, inv);
  const auto &row = cm.Row(s);
  Rng rng(7);
  std::map<PhoneSeq, int> first;
  double zw = -1, thw = -1;
  for (int i = 0; i < kLawTrials; ++i) {
    auto opts = SampleAlternatives(row, rng);
    ++first[opts[0].output];
    if (opts.size() == 2 && opts[0].output == PhoneSeq{z} && opts[1].output == PhoneSeq{th}) {
      zw = opts[0].weight;
      thw = opts[1].weight;
    }
  }
  bool ok = true;
  double worst_sigmas = 0;
  for (const auto &alt : row) {
    double expected = kLawTrials * alt.prob;
    double sigma = std::sqrt(kLawTrials * alt.prob * (1 - alt.prob));
    double dev = std::abs(first[alt.output] - expected) / sigma;
    worst_sigmas = std::max(worst_sigmas, dev);
    ok = ok && dev <= kSigmas;
  }
  ok = ok && std::abs(zw - 0.9278) <= kReweightTol && std::abs(thw - 0.0722) <= kReweightTol;
  return {ok, "max deviation " + Fmt(worst_sigmas, 2) + " sigma over " +
                  std::to_string(kLawTrials) + " trials; draws (z, th) -> (" + Fmt(zw) + ", " +
                  Fmt(thw) + ")"};
}

// 8. The identity channel returns its input.
Outcome IdentityEndToEnd() {
  const auto &inv = test::Arpabet();
  auto lexicon = LoadLexicon(test::DataPath("toy/lexicon.txt"), inv);
  auto lm = LoadArpa(test::DataPath("toy/lm.arpa"));
  DecodingContext ctx(inv, lexicon, lm);
  auto identity = ConfusionMatrix::Identity(inv);
  Fst c = BuildConfusionFst(identity, inv);
  size_t sentences = 0, bad = 0;
  for (const char *file : {"toy/train.tsv", "toy/test.tsv"}) {
    std::ifstream is(test::DataPath(file));
    for (const auto &item : ParseParallelCorpus(is, file).items) {
      for (const WordSeq *words : {&item.gold, &item.recognized}) {
        if (words->empty()) continue;
        ++sentences;
        auto direct = DirectDecode(*words, ctx, c, 5);
        Rng rng(DeriveSeed(1, item.id));
        auto sampled = SampledDecode(*words, ctx, identity, {20, 100}, rng);
        bool ok = direct.entries.size() == 1 && direct.entries[0].words == *words &&
                  sampled.entries.size() == 1 && sampled.entries[0].words == *words &&
                  sampled.entries[0].freq == 20;
        bad += !ok;
      }
    }
  }
  return {bad == 0 && sentences > 0,
          std::to_string(sentences - bad) + "/" + std::to_string(sentences) +
              " sentences reproduced by direct 1-best and all 20 sampled iterations"};
}

// 9. Same seed, same bytes.
Outcome Reproducibility() {
  fs::path dir = ScratchDir("repro");
  auto p = [&](const std::string &name) { return (dir / name).string(); };
  const std::string lex = test::DataPath("toy/lexicon.txt"), lm = test::DataPath("toy/lm.arpa"),
                    text = test::DataPath("toy/text.tsv"), gold = test::DataPath("toy/test.tsv");
  if (Cli({"train-confmat", "--corpus", test::DataPath("toy/train.tsv"), "--lexicon", lex, "--out",
           p("cm.txt")}) != 0)
    return {false, "train-confmat failed"};
  size_t compared = 0, differ = 0;
  for (std::string mode : {"direct", "sampled", "seq2seq-direct", "seq2seq-sampled", "merge"}) {
    std::string bytes[2], report[2];
    for (int run = 0; run < 2; ++run) {
      std::string sim = p(mode + std::to_string(run) + ".jsonl");
      std::string rep = p(mode + std::to_string(run) + ".json");
      std::string tsv = p(mode + std::to_string(run) + ".tsv");
      if (Cli({"simulate", "--mode", mode, "--seed", "11", "--k", "20", "--threads",
               run ? "4" : "1", "--input", text, "--lexicon", lex, "--lm", lm, "--matrix",
               p("cm.txt"), "--distributions", test::DataPath("toy/distributions.jsonl"), "--out",
               sim}) != 0 ||
          Cli({"evaluate", "--k", "20", "--corpus", gold, "--predictions", sim, "--out", rep,
               "--per-utterance", tsv}) != 0)
        return {false, mode + " run failed"};
      bytes[run] = Slurp(sim);
      report[run] = Slurp(rep) + Slurp(tsv);
    }
    compared += 2;
    differ += (bytes[0] != bytes[1]) + (report[0] != report[1]);
  }
  fs::remove_all(dir);
  return {differ == 0, std::to_string(compared - differ) + "/" + std::to_string(compared) +
                           " simulate/evaluate artifacts identical across two runs (1 vs 4 threads)"};
}

// 10. Trailing <eos> steps need the augmented graph.
Outcome EndOfSequence() {
  const auto &inv = test::Arpabet();
  auto lexicon = LoadLexicon(test::DataPath("toy/lexicon.txt"), inv);
  auto lm = LoadArpa(test::DataPath("toy/lm.arpa"));
  DecodingContext ctx(inv, lexicon, lm);
  class Echo : public DistributionProvider {
   public:
    explicit Echo(Label eos) : eos_(eos) {}
    std::optional<StepDistributions> Next(const std::string &id, std::span<const Label> phones,
                                          std::span<const Cue>) override {
      StepDistributions d{id, {}};
      for (Label p : phones) d.steps.push_back({{p, 1.0}});
      d.steps.push_back({{eos_, 1.0}});
      d.steps.push_back({{eos_, 1.0}});
      return d;
    }

   private:
    Label eos_;
  } echo(inv.eos());
  CollapsedErrorMatrix collapsed = CollapseErrorTypes(ConfusionMatrix::Identity(inv));
  WordSeq words{"the", "cat", "sat", "on", "the", "mat"};
  Seq2SeqOptions opts;
  opts.k = 5;
  opts.max_iterations = 2;
  Rng rng(10);
  auto with = Seq2SeqDecode("u", words, echo, ctx, collapsed, opts, rng);
  opts.absorb_eos = false;
  auto without = Seq2SeqDecode("u", words, echo, ctx, collapsed, opts, rng);
  bool ok = !with.entries.empty() && with.entries[0].words == words && without.entries.empty() &&
            without.empty_composition;
  bool echoed = !with.entries.empty() && with.entries[0].words == words;
  return {ok, std::string("augmented graph: ") + (echoed ? "1-best equals input" : "input lost") +
                  "; plain graph: " +
                  (without.empty_composition ? "empty composition" : "paths found")};
}

}  // namespace
}  // namespace phonsim

int main() {
  using namespace phonsim;
  const std::vector<std::function<Outcome()>> criteria = {
      SyntheticChannel, WorkedExample, Oracles,          DistributionValidity, Temperature,
      Smoothing,        SamplingLaw,   IdentityEndToEnd, Reproducibility,      EndOfSequence};
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    try {
      r = criteria[i]();
    } catch (const std::exception &e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failures += !r.pass;
    std::cout << "criterion " << (i + 1) << ": " << (r.pass ? "PASS" : "FAIL") << "  "
              << r.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
