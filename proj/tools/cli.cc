// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "phonsim/align.h"
#include "phonsim/arpa_lm.h"
#include "phonsim/builders.h"
#include "phonsim/confusion_matrix.h"
#include "phonsim/corpus.h"
#include "phonsim/error.h"
#include "phonsim/eval.h"
#include "phonsim/jsonl_io.h"
#include "phonsim/random.h"
#include "phonsim/simulate.h"
#include "phonsim/synthetic.h"

#ifndef PHONSIM_DATA_DIR
#define PHONSIM_DATA_DIR "data"
#endif

namespace phonsim {

namespace {

struct RunConfig {
  uint64_t seed = 20181018;
  size_t k = 100;
  size_t iterations = 0;  // 0: 10 * k
  double tau = 10.0;
  double beta = 0.8;
  size_t top_k = 3;
  double eos_cost = 0.1;
  double indel_cost = 0.7;
  double add_k = 0.0;
  size_t max_expansions = 2000000;
  size_t threads = 0;  // 0: hardware concurrency
  size_t cues_per_utterance = 10;
  std::string mode = "direct";
  std::string softmax_scope = "selected";
  std::string pron_policy = "first";
  bool scores_are_logs = false;
  bool weight_prons = false;
  bool loose = false;
  bool keep_case = false;

  std::string inventory = PHONSIM_DATA_DIR "/phones.txt";
  std::string lexicon, lm, corpus, input, matrix, distributions, predictions;
  std::string out, per_utterance, alignments;

  size_t Iterations() const { return iterations ? iterations : 10 * k; }
  PronunciationPolicy Policy() const {
    return pron_policy == "sample" ? PronunciationPolicy::kSample : PronunciationPolicy::kFirst;
  }
  CorpusOptions Corpus() const { return CorpusOptions{!keep_case}; }
};

std::string Require(const std::string &value, const char *flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
  return value;
}

// Output stream for `path`, or `fallback` when the path is empty or "-".
class OutputFile {
 public:
  OutputFile(const std::string &path, std::ostream &fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
      return;
    }
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    file_.open(path, std::ios::binary);
    if (!file_) throw Error(ErrorKind::kIo, "cannot write " + path);
    os_ = &file_;
  }
  std::ostream &stream() { return *os_; }
  void Close() {
    os_->flush();
    if (!*os_) throw Error(ErrorKind::kIo, "write failed");
  }

 private:
  std::ofstream file_;
  std::ostream *os_ = nullptr;
};

// Runs fn(i) for i in [0, n) on a worker pool. The first failure (by
// index) is rethrown after all workers stop.
void ParallelFor(size_t n, size_t threads, const std::function<void(size_t)> &fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (size_t i; !failed && (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &th : pool) th.join();
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<Alignment> AlignCorpus(const ParallelCorpus &corpus, const Lexicon &lexicon,
                                   const PhoneInventory &inventory, const RunConfig &cfg) {
  std::vector<Alignment> alignments(corpus.items.size());
  AlignOptions opts{cfg.indel_cost};
  ParallelFor(corpus.items.size(), cfg.threads, [&](size_t i) {
    const auto &item = corpus.items[i];
    Rng rng(DeriveSeed(cfg.seed, item.id));
    PhoneSeq ref = WordsToPhones(item.gold, lexicon, cfg.Policy(), &rng);
    PhoneSeq hyp = WordsToPhones(item.recognized, lexicon, cfg.Policy(), &rng);
    alignments[i] = AlignPhones(ref, hyp, inventory, opts);
  });
  return alignments;
}

int TrainConfmat(const RunConfig &cfg, std::ostream &out) {
  auto inventory = PhoneInventory::Load(cfg.inventory);
  auto lexicon = LoadLexicon(Require(cfg.lexicon, "--lexicon"), inventory, {!cfg.keep_case});
  auto corpus = LoadParallelCorpus(Require(cfg.corpus, "--corpus"), cfg.Corpus());
  auto alignments = AlignCorpus(corpus, lexicon, inventory, cfg);
  auto cm = EstimateConfusionMatrix(alignments, inventory, {cfg.add_k});
  cm.Validate(inventory);
  OutputFile os(cfg.out, out);
  cm.Write(os.stream(), inventory);
  os.Close();
  if (!cfg.alignments.empty()) {
    OutputFile dump(cfg.alignments, out);
    for (const auto &a : alignments) WriteAlignment(dump.stream(), a, inventory);
    dump.Close();
  }
  return kExitOk;
}

int AlignDump(const RunConfig &cfg, std::ostream &out) {
  auto inventory = PhoneInventory::Load(cfg.inventory);
  auto lexicon = LoadLexicon(Require(cfg.lexicon, "--lexicon"), inventory, {!cfg.keep_case});
  auto corpus = LoadParallelCorpus(Require(cfg.corpus, "--corpus"), cfg.Corpus());
  auto alignments = AlignCorpus(corpus, lexicon, inventory, cfg);
  OutputFile os(cfg.out, out);
  for (const auto &a : alignments) WriteAlignment(os.stream(), a, inventory);
  os.Close();
  return kExitOk;
}

int Simulate(const RunConfig &cfg, std::ostream &out) {
  static const std::vector<std::string> kModes = {"direct", "sampled", "seq2seq-direct",
                                                  "seq2seq-sampled", "merge"};
  if (std::find(kModes.begin(), kModes.end(), cfg.mode) == kModes.end())
    throw CLI::ValidationError("--mode", "unknown mode " + cfg.mode);
  const bool needs_seq2seq = cfg.mode.rfind("seq2seq", 0) == 0 || cfg.mode == "merge";
  if (cfg.mode == "merge" && cfg.k % 2 != 0)
    throw CLI::ValidationError("--k", "merge mode needs an even k");

  auto inventory = PhoneInventory::Load(cfg.inventory);
  auto lexicon = LoadLexicon(Require(cfg.lexicon, "--lexicon"), inventory, {!cfg.keep_case});
  auto lm = LoadArpa(Require(cfg.lm, "--lm"));
  auto cm = ConfusionMatrix::Load(Require(cfg.matrix, "--matrix"), inventory);
  auto items = LoadTextItems(Require(cfg.input, "--input"), cfg.Corpus());

  DecodingContext::Options ctx_opts;
  ctx_opts.lexicon.weight_by_pronunciations = cfg.weight_prons;
  ctx_opts.eos_cost = cfg.eos_cost;
  DecodingContext ctx(inventory, lexicon, lm, ctx_opts);

  std::optional<Fst> confusion_fst;
  if (cfg.mode == "direct") confusion_fst = BuildConfusionFst(cm, inventory);
  std::unique_ptr<FileDistributionProvider> provider;
  CollapsedErrorMatrix collapsed;
  if (needs_seq2seq) {
    std::ifstream is(Require(cfg.distributions, "--distributions"));
    if (!is) throw Error(ErrorKind::kIo, "cannot read " + cfg.distributions);
    provider = std::make_unique<FileDistributionProvider>(
        ReadStepDistributions(is, cfg.distributions, inventory));
    collapsed = CollapseErrorTypes(cm);
  }

  Seq2SeqOptions s2s;
  s2s.k = cfg.k;
  s2s.max_iterations = cfg.Iterations();
  s2s.policy = cfg.Policy();
  s2s.lattice.top_k = cfg.top_k;
  s2s.lattice.tau = cfg.tau;
  s2s.lattice.scores_are_logs = cfg.scores_are_logs;
  s2s.lattice.scope = cfg.softmax_scope == "all" ? SoftmaxScope::kAll : SoftmaxScope::kSelected;
  SampledDecodeOptions sampled{cfg.Iterations(), cfg.k, cfg.Policy()};

  std::vector<NBestList> results(items.size());
  ParallelFor(items.size(), cfg.threads, [&](size_t i) {
    const auto &item = items[i];
    auto seq2seq = [&](Seq2SeqMode mode, const std::string &stream) {
      Rng rng(DeriveSeed(cfg.seed, item.id + stream));
      Seq2SeqOptions opts = s2s;
      opts.mode = mode;
      return Seq2SeqDecode(item.id, item.words, *provider, ctx, collapsed, opts, rng);
    };
    if (cfg.mode == "direct") {
      results[i] = DirectDecode(item.words, ctx, *confusion_fst, cfg.k, {cfg.max_expansions});
    } else if (cfg.mode == "sampled") {
      Rng rng(DeriveSeed(cfg.seed, item.id));
      results[i] = SampledDecode(item.words, ctx, cm, sampled, rng);
    } else if (cfg.mode == "seq2seq-direct") {
      results[i] = seq2seq(Seq2SeqMode::kDirect, "");
    } else if (cfg.mode == "seq2seq-sampled") {
      results[i] = seq2seq(Seq2SeqMode::kSampled, "");
    } else {
      NBestList a = seq2seq(Seq2SeqMode::kDirect, "/seq2seq");
      Rng rng(DeriveSeed(cfg.seed, item.id + "/sampled"));
      NBestList b = SampledDecode(item.words, ctx, cm, sampled, rng);
      results[i] = MergeKBest(a, b, cfg.k);
    }
  });

  OutputFile os(cfg.out, out);
  for (size_t i = 0; i < items.size(); ++i) WriteNBestLine(os.stream(), items[i].id, results[i]);
  os.Close();
  return kExitOk;
}

int Evaluate(const RunConfig &cfg, std::ostream &out) {
  auto corpus = LoadParallelCorpus(Require(cfg.corpus, "--corpus"), cfg.Corpus());
  std::ifstream is(Require(cfg.predictions, "--predictions"));
  if (!is) throw Error(ErrorKind::kIo, "cannot read " + cfg.predictions);
  auto predictions = ReadPredictions(is, cfg.predictions);
  std::vector<EvalItem> test;
  for (const auto &item : corpus.items) test.push_back({item.id, item.gold, item.recognized});
  EvalOptions opts{cfg.k, !cfg.loose};
  auto report = EvaluateRecall(test, predictions, opts);
  OutputFile os(cfg.out, out);
  WriteRecallJson(os.stream(), report);
  os.Close();
  if (!cfg.per_utterance.empty()) {
    OutputFile tsv(cfg.per_utterance, out);
    WriteRecallTsv(tsv.stream(), report);
    tsv.Close();
  }
  return kExitOk;
}

std::vector<std::string> PhoneNames(const PhoneInventory &inventory, const PhoneSeq &phones) {
  std::vector<std::string> names;
  for (Label p : phones) names.push_back(inventory.Name(p));
  return names;
}

// Cue sequences for test-time queries of an external sequence model.
int SampleCuesCommand(const RunConfig &cfg, std::ostream &out) {
  auto inventory = PhoneInventory::Load(cfg.inventory);
  auto lexicon = LoadLexicon(Require(cfg.lexicon, "--lexicon"), inventory, {!cfg.keep_case});
  auto cm = ConfusionMatrix::Load(Require(cfg.matrix, "--matrix"), inventory);
  auto items = LoadTextItems(Require(cfg.input, "--input"), cfg.Corpus());
  auto collapsed = CollapseErrorTypes(cm);
  OutputFile os(cfg.out, out);
  for (const auto &item : items) {
    Rng rng(DeriveSeed(cfg.seed, item.id));
    PhoneSeq phones = WordsToPhones(item.words, lexicon, cfg.Policy(), &rng);
    for (size_t n = 0; n < cfg.cues_per_utterance; ++n) {
      nlohmann::ordered_json j;
      j["id"] = item.id;
      j["phones"] = PhoneNames(inventory, phones);
      std::vector<std::string> cues;
      for (Cue c : SampleCues(collapsed, phones, rng)) cues.push_back(CueName(c));
      j["cues"] = cues;
      os.stream() << j.dump() << '\n';
    }
  }
  os.Close();
  return kExitOk;
}

// Training material for an external sequence model: input phones, cue
// labels, recognized phones and smoothed per-step targets.
int Seq2SeqTargets(const RunConfig &cfg, std::ostream &out) {
  auto inventory = PhoneInventory::Load(cfg.inventory);
  auto lexicon = LoadLexicon(Require(cfg.lexicon, "--lexicon"), inventory, {!cfg.keep_case});
  auto corpus = LoadParallelCorpus(Require(cfg.corpus, "--corpus"), cfg.Corpus());
  auto alignments = AlignCorpus(corpus, lexicon, inventory, cfg);
  ConfusionMatrix cm = cfg.matrix.empty()
                           ? EstimateConfusionMatrix(alignments, inventory, {cfg.add_k})
                           : ConfusionMatrix::Load(cfg.matrix, inventory);
  OutputFile os(cfg.out, out);
  for (size_t i = 0; i < corpus.items.size(); ++i) {
    const auto &alignment = alignments[i];
    PhoneSeq input, output;
    for (const auto &pair : alignment.pairs) {
      input.push_back(pair.input);
      output.insert(output.end(), pair.output.begin(), pair.output.end());
    }
    nlohmann::ordered_json j;
    j["id"] = corpus.items[i].id;
    j["input"] = PhoneNames(inventory, input);
    std::vector<std::string> cues;
    for (Cue c : CueLabels(alignment)) cues.push_back(CueName(c));
    j["cues"] = cues;
    j["output"] = PhoneNames(inventory, output);
    auto targets = nlohmann::ordered_json::array();
    for (Label y : output) {
      auto step = nlohmann::ordered_json::array();
      for (const auto &[label, p] : SmoothTargets(y, cm, cfg.beta).probs)
        step.push_back({inventory.Name(label), p});
      targets.push_back(std::move(step));
    }
    j["targets"] = std::move(targets);
    os.stream() << j.dump() << '\n';
  }
  os.Close();
  return kExitOk;
}

void WriteTsv(const std::string &path, const std::vector<ParallelItem> &items) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::kIo, "cannot write " + path);
  for (const auto &item : items) {
    os << item.id << '\t';
    for (size_t i = 0; i < item.gold.size(); ++i) os << (i ? " " : "") << item.gold[i];
    os << '\t';
    for (size_t i = 0; i < item.recognized.size(); ++i) os << (i ? " " : "") << item.recognized[i];
    os << '\n';
  }
}

int Synth(const RunConfig &cfg, size_t train_sentences) {
  auto inventory = PhoneInventory::Load(cfg.inventory);
  SyntheticOptions opts;
  opts.seed = cfg.seed;
  auto data = GenerateSyntheticCorpus(inventory, opts);
  const std::string dir = Require(cfg.out, "--out");
  WriteSyntheticCorpus(dir, data, inventory);
  const auto &items = data.corpus.items;
  size_t split = std::min(train_sentences, items.size());
  WriteTsv(dir + "/train.tsv", {items.begin(), items.begin() + split});
  WriteTsv(dir + "/test.tsv", {items.begin() + split, items.end()});
  return kExitOk;
}

// Error lines must stay on one line for scripts that parse them.
std::string OneLine(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

int ExitCodeFor(ErrorKind kind) {
  return kind == ErrorKind::kResource ? kExitResource : kExitData;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  size_t train_sentences = 400;
  CLI::App app{"Phonetic confusion based ASR error simulation"};
  app.set_config("--config", "", "INI/TOML file with option defaults; flags override it");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--seed", cfg.seed, "Global random seed")->capture_default_str();
  app.add_option("--k", cfg.k, "Alternatives per utterance")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--iterations", cfg.iterations, "Sampling iterations cap (0: 10*k)")
      ->capture_default_str();
  app.add_option("--tau", cfg.tau, "Softmax temperature")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--beta", cfg.beta, "Target smoothing weight")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--top-k", cfg.top_k, "Symbols kept per sequence-model step")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--eos-cost", cfg.eos_cost, "Cost of absorbing one <eos>")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--indel-cost", cfg.indel_cost, "Alignment insertion/deletion cost")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--add-k", cfg.add_k, "Add-k smoothing of confusion rows")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--max-expansions", cfg.max_expansions, "N-best search expansion cap")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--cues-per-utterance", cfg.cues_per_utterance, "Cue sequences per utterance")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--train-sentences", train_sentences, "Sentences in the synthetic train split")
      ->capture_default_str();
  app.add_option("--mode", cfg.mode, "direct|sampled|seq2seq-direct|seq2seq-sampled|merge")
      ->check(CLI::IsMember({"direct", "sampled", "seq2seq-direct", "seq2seq-sampled", "merge"}))
      ->capture_default_str();
  app.add_option("--softmax-scope", cfg.softmax_scope, "selected|all")
      ->check(CLI::IsMember({"selected", "all"}))->capture_default_str();
  app.add_option("--pron-policy", cfg.pron_policy, "first|sample")
      ->check(CLI::IsMember({"first", "sample"}))->capture_default_str();
  app.add_flag("--scores-are-logs", cfg.scores_are_logs, "Distribution values are log scores");
  app.add_flag("--weight-prons", cfg.weight_prons, "Weight pronunciations by 1/#prons");
  app.add_flag("--loose", cfg.loose, "Credit chunks regardless of position");
  app.add_flag("--keep-case", cfg.keep_case, "Do not lowercase transcripts");
  app.add_option("--inventory", cfg.inventory, "Phone inventory")->capture_default_str();
  app.add_option("--lexicon", cfg.lexicon, "Pronunciation lexicon");
  app.add_option("--lm", cfg.lm, "ARPA language model");
  app.add_option("--corpus", cfg.corpus, "Parallel id/gold/recognized TSV");
  app.add_option("--input", cfg.input, "Text to simulate (id<TAB>text)");
  app.add_option("--matrix", cfg.matrix, "Confusion matrix");
  app.add_option("--distributions", cfg.distributions, "Sequence-model distributions (JSONL)");
  app.add_option("--predictions", cfg.predictions, "Simulated alternatives (JSONL)");
  app.add_option("--out", cfg.out, "Output file (directory for synth); stdout if omitted");
  app.add_option("--per-utterance", cfg.per_utterance, "Per-utterance evaluation TSV");
  app.add_option("--alignments", cfg.alignments, "Alignment dump written by train-confmat");

  std::map<CLI::App *, std::function<int()>> commands;
  auto add = [&](const char *name, const char *help, std::function<int()> fn) {
    commands[app.add_subcommand(name, help)] = std::move(fn);
  };
  add("train-confmat", "Estimate a confusion matrix from a parallel corpus",
      [&] { return TrainConfmat(cfg, out); });
  add("align-dump", "Write phone alignments of a parallel corpus",
      [&] { return AlignDump(cfg, out); });
  add("simulate", "Generate k-best errorful alternatives", [&] { return Simulate(cfg, out); });
  add("evaluate", "Chunk and utterance recall at k", [&] { return Evaluate(cfg, out); });
  add("sample-cues", "Sample error-type cue sequences for text",
      [&] { return SampleCuesCommand(cfg, out); });
  add("seq2seq-targets", "Write sequence-model training targets",
      [&] { return Seq2SeqTargets(cfg, out); });
  add("synth", "Write a synthetic noisy-channel corpus", [&] { return Synth(cfg, train_sentences); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return kExitUsage;
  }

  CLI::App *command = app.get_subcommands().front();
  {
    std::istringstream resolved(app.config_to_str(true, false));
    err << "# phonsim " << command->get_name() << '\n';
    for (std::string line; std::getline(resolved, line);)
      if (!line.empty()) err << "# " << line << '\n';
  }

  try {
    return commands.at(command)();
  } catch (const CLI::Error &e) {
    err << "error: usage: " << OneLine(e.what()) << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << ErrorKindName(e.kind()) << ": " << OneLine(e.what()) << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    err << "error: internal: " << OneLine(e.what()) << '\n';
    return kExitInternal;
  }
}

}  // namespace phonsim
