// tools/cli.cc

// Copyright 2026  The Defake Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "config.h"
#include "defake/analysis.h"
#include "defake/augment.h"
#include "defake/calib.h"
#include "defake/corpus.h"
#include "defake/dsp.h"
#include "defake/error.h"
#include "defake/localize.h"
#include "defake/metrics.h"
#include "defake/rng.h"
#include "defake/synth.h"
#include "defake/util.h"
#include "defake/wave.h"

namespace defake {
namespace {

namespace fs = std::filesystem;

constexpr const char* kVersionLine = "defake 0.1.0 (file formats v1)";

// Options shared by every subcommand.  The option pointers let resolution
// distinguish "set on the command line" from "left at default".
struct GlobalArgs {
  std::string config_path;
  bool flip = false;
  CLI::Option* o_config = nullptr;
  CLI::Option* o_flip = nullptr;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
};

// Binds one subcommand's options to its config section.  A flag given on
// the command line wins over the config value, which wins over the default.
// Every resolved key is recorded in call order, so the final configuration
// can be echoed verbatim and the section checked for unknown keys.
class Resolver {
 public:
  Resolver(const RunConfig& cfg, std::string section)
      : cfg_(&cfg), section_(std::move(section)) {}

  void String(const CLI::Option* opt, const char* key, std::string* v) {
    if (const std::string* c = Override(opt, key)) *v = *c;
    Record(key, *v);
  }

  // Config value is a whitespace-separated path list.
  void PathList(const CLI::Option* opt, const char* key,
                std::vector<std::string>* v) {
    if (const std::string* c = Override(opt, key)) {
      v->clear();
      for (std::string_view field : SplitFields(*c)) v->emplace_back(field);
    }
    std::string joined;
    for (const std::string& p : *v) {
      if (!joined.empty()) joined += ' ';
      joined += p;
    }
    Record(key, joined);
  }

  void Double(const CLI::Option* opt, const char* key, double* v) {
    if (const std::string* c = Override(opt, key)) {
      if (!ParseDouble(*c, v)) Bad(key, *c);
    }
    Record(key, FormatDouble(*v));
  }

  void Int(const CLI::Option* opt, const char* key, int* v) {
    if (const std::string* c = Override(opt, key)) {
      std::int64_t parsed = 0;
      if (!ParseInt(*c, &parsed) ||
          parsed < std::numeric_limits<int>::min() ||
          parsed > std::numeric_limits<int>::max()) {
        Bad(key, *c);
      }
      *v = static_cast<int>(parsed);
    }
    Record(key, std::to_string(*v));
  }

  void Seed(const CLI::Option* opt, const char* key, std::uint64_t* v) {
    if (const std::string* c = Override(opt, key)) {
      std::int64_t parsed = 0;
      if (!ParseInt(*c, &parsed) || parsed < 0) Bad(key, *c);
      *v = static_cast<std::uint64_t>(parsed);
    }
    Record(key, std::to_string(*v));
  }

  void Bool(const CLI::Option* opt, const char* key, bool* v) {
    if (const std::string* c = Override(opt, key)) {
      if (*c == "1" || *c == "true") {
        *v = true;
      } else if (*c == "0" || *c == "false") {
        *v = false;
      } else {
        Bad(key, *c);
      }
    }
    Record(key, *v ? "1" : "0");
  }

  // Rejects config keys in this section that no resolve call claimed.
  void CheckKnown() const {
    std::vector<std::string_view> known(keys_.begin(), keys_.end());
    cfg_->RequireKnown(section_, known);
  }

  // The fully resolved configuration, loadable as a config file.
  std::string Text() const {
    std::string text = "[" + section_ + "]\n";
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      text += keys_[i] + " = " + values_[i] + "\n";
    }
    return text;
  }

 private:
  const std::string* Override(const CLI::Option* opt, const char* key) const {
    if (opt != nullptr && opt->count() > 0) return nullptr;
    return cfg_->Find(section_, key);
  }

  [[noreturn]] void Bad(const char* key, const std::string& value) const {
    throw Error(ErrorCode::kBadConfig, "bad value for " + section_ + "." +
                                           key + ": '" + value + "'");
  }

  void Record(const char* key, std::string value) {
    keys_.emplace_back(key);
    values_.push_back(std::move(value));
  }

  const RunConfig* cfg_;
  std::string section_;
  std::vector<std::string> keys_;
  std::vector<std::string> values_;
};

void Require(const std::string& value, const char* what) {
  if (value.empty()) {
    throw Error(ErrorCode::kBadConfig,
                std::string("missing required ") + what);
  }
}

void RequireJobs(int jobs) {
  if (jobs < 1) {
    throw Error(ErrorCode::kBadConfig,
                "jobs must be positive, got " + std::to_string(jobs));
  }
}

std::vector<std::string> SplitCsv(std::string_view text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = TrimWhitespace(text.substr(start, comma - start));
    if (!item.empty()) items.emplace_back(item);
    start = comma + 1;
  }
  return items;
}

ScoreSet LoadScores(const std::string& path, ScoreSemantics semantics,
                    bool flip) {
  ScoreSet s = ParseScoreSet(ReadFileToString(path), semantics);
  if (flip) {
    for (ScoreSet::Entry& e : s.entries) e.score = -e.score;
  }
  return s;
}

ScoreSet SortByUtt(ScoreSet s) {
  std::sort(s.entries.begin(), s.entries.end(),
            [](const ScoreSet::Entry& a, const ScoreSet::Entry& b) {
              return a.utt_id < b.utt_id;
            });
  s.index.clear();
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    s.index[s.entries[i].utt_id] = i;
  }
  return s;
}

std::vector<std::string> SortedIds(const ScoreSet& s) {
  std::vector<std::string> ids;
  ids.reserve(s.entries.size());
  for (const ScoreSet::Entry& e : s.entries) ids.push_back(e.utt_id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void RequireSameIds(const std::vector<std::string>& ids, const ScoreSet& s,
                    const std::string& what) {
  if (s.entries.size() != ids.size() ||
      !std::all_of(ids.begin(), ids.end(),
                   [&](const std::string& id) { return s.Has(id); })) {
    throw Error(ErrorCode::kIdSetMismatch,
                what + " does not cover the same utterances");
  }
}

std::vector<std::string> ReadManifest(const std::string& path) {
  std::vector<std::string> files;
  ForEachLine(ReadFileToString(path),
              [&](std::int64_t, std::string_view line) {
                std::string_view t = TrimWhitespace(line);
                if (t.empty() || t.front() == '#') return;
                files.emplace_back(t);
              });
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyInput, "manifest lists no files: " + path);
  }
  return files;
}

// File stems name the outputs, so they must be unique per run.
std::vector<std::string> StemsOf(const std::vector<std::string>& files) {
  std::vector<std::string> stems;
  stems.reserve(files.size());
  std::unordered_set<std::string> seen;
  for (const std::string& f : files) {
    std::string stem = fs::path(f).stem().string();
    if (stem.empty()) {
      throw Error(ErrorCode::kBadConfig, "manifest path has no stem: " + f);
    }
    if (!seen.insert(stem).second) {
      throw Error(ErrorCode::kDuplicateUtterance,
                  "duplicate stem in manifest: " + stem, stem);
    }
    stems.push_back(std::move(stem));
  }
  return stems;
}

WindowKind WindowFromName(const std::string& name) {
  if (name == "hamming") return WindowKind::kHamming;
  if (name == "hann") return WindowKind::kHann;
  if (name == "rect") return WindowKind::kRect;
  throw Error(ErrorCode::kBadConfig, "unknown window: '" + name + "'");
}

FeatureKind FeatureKindFromName(const std::string& name) {
  if (name == "lfcc") return FeatureKind::kLfcc;
  if (name == "fbank") return FeatureKind::kFbank;
  throw Error(ErrorCode::kBadConfig, "unknown feature kind: '" + name + "'");
}

std::vector<std::string> KeyOrder(const TrialKey& key) {
  std::vector<std::string> order;
  order.reserve(key.entries.size());
  for (const TrialKey::Entry& e : key.entries) order.push_back(e.utt_id);
  return order;
}

std::vector<std::string> PickSplit(const std::vector<std::string>& order,
                                   const std::string& split) {
  if (split == "all") return order;
  CorpusSplit s = SplitCorpus(order);
  if (split == "train") return std::move(s.train);
  if (split == "dev") return std::move(s.dev);
  if (split == "eval") return std::move(s.eval);
  throw Error(ErrorCode::kBadConfig, "unknown split: '" + split + "'");
}

std::string PathUnder(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ReportTraining(const TrainReport& report, std::ostream& err) {
  err << "iterations=" << report.n_iter << "\n"
      << "grad_inf_norm=" << FormatDouble(report.grad_inf_norm) << "\n"
      << "converged=" << (report.converged ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string scores, key, metrics = "eer", summary;
  double ptarget = 0.05, cmiss = 1.0, cfa = 10.0;
  bool llr = false;
  CLI::Option *o_scores = nullptr, *o_key = nullptr, *o_metrics = nullptr,
              *o_summary = nullptr, *o_ptarget = nullptr, *o_cmiss = nullptr,
              *o_cfa = nullptr, *o_llr = nullptr;
};

void RunEval(EvalArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "eval");
  bool flip = g.flip;
  res.String(a.o_scores, "scores", &a.scores);
  res.String(a.o_key, "key", &a.key);
  res.String(a.o_metrics, "metrics", &a.metrics);
  res.Double(a.o_ptarget, "ptarget", &a.ptarget);
  res.Double(a.o_cmiss, "cmiss", &a.cmiss);
  res.Double(a.o_cfa, "cfa", &a.cfa);
  res.Bool(a.o_llr, "llr", &a.llr);
  res.String(a.o_summary, "summary", &a.summary);
  res.Bool(g.o_flip, "flip", &flip);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.scores, "--scores");
  Require(a.key, "--key");

  enum { kEer, kMinDcf, kActDcf, kCllr, kNumMetrics };
  bool want[kNumMetrics] = {};
  const std::vector<std::string> requested = SplitCsv(a.metrics);
  if (requested.empty()) {
    throw Error(ErrorCode::kBadConfig, "metrics list is empty");
  }
  for (const std::string& m : requested) {
    if (m == "eer") {
      want[kEer] = true;
    } else if (m == "mindcf") {
      want[kMinDcf] = true;
    } else if (m == "actdcf") {
      want[kActDcf] = true;
    } else if (m == "cllr") {
      want[kCllr] = true;
    } else {
      throw Error(ErrorCode::kBadConfig, "unknown metric: '" + m + "'");
    }
  }
  if (!(a.ptarget > 0.0 && a.ptarget < 1.0) || !(a.cmiss > 0.0) ||
      !(a.cfa > 0.0)) {
    throw Error(ErrorCode::kBadConfig, "invalid cost parameters");
  }
  const CostParams costs{a.ptarget, a.cmiss, a.cfa};

  const ScoreSet scores = LoadScores(
      a.scores, a.llr ? ScoreSemantics::kLlr : ScoreSemantics::kRaw, flip);
  const TrialKey key = ParseTrialKey(ReadFileToString(a.key));
  const JoinedScores joined = JoinWithKey(scores, key);
  *g.err << "n_bonafide=" << joined.bonafide.size() << "\n"
         << "n_spoof=" << joined.spoof.size() << "\n";

  std::string text;
  if (want[kEer]) {
    text += "eer=" + FormatDouble(ComputeEer(joined).eer) + "\n";
  }
  if (want[kMinDcf]) {
    text += "mindcf=" + FormatDouble(ComputeMinDcf(joined, costs).dcf) + "\n";
  }
  if (want[kActDcf]) {
    text += "actdcf=" + FormatDouble(ComputeActDcf(joined, costs)) + "\n";
  }
  if (want[kCllr]) {
    text += "cllr=" + FormatDouble(ComputeCllr(joined)) + "\n";
  }
  *g.out << text;
  if (!a.summary.empty()) {
    WriteFileAtomic(a.summary, text);
    WriteFileAtomic(a.summary + ".cfg", res.Text());
  }
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateArgs {
  std::string dev_scores, dev_key, eval_scores, out_scores, model;
  double prior = 0.5;
  CLI::Option *o_dev_scores = nullptr, *o_dev_key = nullptr,
              *o_eval_scores = nullptr, *o_out_scores = nullptr,
              *o_model = nullptr, *o_prior = nullptr;
};

void RunCalibrate(CalibrateArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "calibrate");
  bool flip = g.flip;
  res.String(a.o_dev_scores, "dev_scores", &a.dev_scores);
  res.String(a.o_dev_key, "dev_key", &a.dev_key);
  res.String(a.o_eval_scores, "eval_scores", &a.eval_scores);
  res.String(a.o_out_scores, "out_scores", &a.out_scores);
  res.Double(a.o_prior, "prior", &a.prior);
  res.String(a.o_model, "model", &a.model);
  res.Bool(g.o_flip, "flip", &flip);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.dev_scores, "--dev-scores");
  Require(a.dev_key, "--dev-key");
  Require(a.model, "--model");
  if (a.eval_scores.empty() != a.out_scores.empty()) {
    throw Error(ErrorCode::kBadConfig,
                "--eval-scores and --out-scores must be given together");
  }
  if (!(a.prior > 0.0 && a.prior < 1.0)) {
    throw Error(ErrorCode::kBadConfig, "prior must lie in (0, 1)");
  }

  const ScoreSet dev = LoadScores(a.dev_scores, ScoreSemantics::kRaw, flip);
  const TrialKey key = ParseTrialKey(ReadFileToString(a.dev_key));
  const JoinedScores joined = JoinWithKey(dev, key);
  const std::size_t nb = joined.bonafide.size();
  const std::size_t ns = joined.spoof.size();
  Eigen::MatrixXd x(nb + ns, 1);
  std::vector<ClassLabel> labels(nb + ns);
  for (std::size_t i = 0; i < nb; ++i) {
    x(static_cast<Eigen::Index>(i), 0) = joined.bonafide[i];
    labels[i] = ClassLabel::kBonafide;
  }
  for (std::size_t i = 0; i < ns; ++i) {
    x(static_cast<Eigen::Index>(nb + i), 0) = joined.spoof[i];
    labels[nb + i] = ClassLabel::kSpoof;
  }
  TrainReport report;
  const AffineCalibrator model = TrainAffine(x, labels, a.prior, {}, &report);
  ReportTraining(report, *g.err);
  WriteFileAtomic(a.model, SerializeCalibrator(model));

  if (!a.eval_scores.empty()) {
    const ScoreSet eval =
        LoadScores(a.eval_scores, ScoreSemantics::kRaw, flip);
    WriteFileAtomic(a.out_scores,
                    SerializeScoreSet(SortByUtt(ApplyAffine(model, eval))));
  }
  WriteFileAtomic(a.model + ".cfg", res.Text());
}

// ---------------------------------------------------------------------------
// fuse

struct FuseArgs {
  std::string method, dev_key, out;
  std::vector<std::string> dev_scores, eval_scores;
  double prior = 0.5;
  CLI::Option *o_method = nullptr, *o_dev_scores = nullptr,
              *o_dev_key = nullptr, *o_eval_scores = nullptr,
              *o_prior = nullptr, *o_out = nullptr;
};

void RunFuse(FuseArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "fuse");
  bool flip = g.flip;
  res.String(a.o_method, "method", &a.method);
  res.PathList(a.o_dev_scores, "dev_scores", &a.dev_scores);
  res.String(a.o_dev_key, "dev_key", &a.dev_key);
  res.PathList(a.o_eval_scores, "eval_scores", &a.eval_scores);
  res.Double(a.o_prior, "prior", &a.prior);
  res.String(a.o_out, "out", &a.out);
  res.Bool(g.o_flip, "flip", &flip);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.method, "--method");
  Require(a.out, "--out");
  if (a.method != "avg" && a.method != "lr") {
    throw Error(ErrorCode::kBadConfig,
                "unknown fusion method: '" + a.method + "'");
  }
  if (a.dev_scores.empty()) Require("", "--dev-scores");
  if (a.eval_scores.size() != a.dev_scores.size()) {
    throw Error(ErrorCode::kBadConfig,
                "need one --eval-scores per --dev-scores");
  }
  if (!(a.prior > 0.0 && a.prior < 1.0)) {
    throw Error(ErrorCode::kBadConfig, "prior must lie in (0, 1)");
  }

  const std::size_t n_systems = a.dev_scores.size();
  std::vector<ScoreSet> dev(n_systems), eval(n_systems);
  for (std::size_t k = 0; k < n_systems; ++k) {
    dev[k] = LoadScores(a.dev_scores[k], ScoreSemantics::kRaw, flip);
    eval[k] = LoadScores(a.eval_scores[k], ScoreSemantics::kRaw, flip);
  }

  ScoreSet fused;
  if (a.method == "avg") {
    std::vector<ScoreSet> normalized;
    normalized.reserve(n_systems);
    for (std::size_t k = 0; k < n_systems; ++k) {
      normalized.push_back(MinMaxApply(MinMaxFit(dev[k]), eval[k]));
    }
    fused = AverageFuse(normalized);
  } else {
    Require(a.dev_key, "--dev-key");
    const TrialKey key = ParseTrialKey(ReadFileToString(a.dev_key));
    const std::vector<std::string> ids = SortedIds(dev[0]);
    for (std::size_t k = 1; k < n_systems; ++k) {
      RequireSameIds(ids, dev[k], "dev scores " + a.dev_scores[k]);
    }
    Eigen::MatrixXd x(ids.size(), n_systems);
    std::vector<ClassLabel> labels(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      labels[i] = key.LabelOf(ids[i]);
      for (std::size_t k = 0; k < n_systems; ++k) {
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            dev[k].ScoreOf(ids[i]);
      }
    }
    TrainReport report;
    const AffineCalibrator model =
        TrainAffine(x, labels, a.prior, {}, &report);
    ReportTraining(report, *g.err);

    const std::vector<std::string> eval_ids = SortedIds(eval[0]);
    for (std::size_t k = 1; k < n_systems; ++k) {
      RequireSameIds(eval_ids, eval[k], "eval scores " + a.eval_scores[k]);
    }
    fused.semantics = ScoreSemantics::kLlr;
    std::vector<double> row(n_systems);
    for (const std::string& id : eval_ids) {
      for (std::size_t k = 0; k < n_systems; ++k) {
        row[k] = eval[k].ScoreOf(id);
      }
      fused.index[id] = fused.entries.size();
      fused.entries.push_back({id, ApplyAffine(model, row)});
    }
  }
  WriteFileAtomic(a.out, SerializeScoreSet(SortByUtt(std::move(fused))));
  WriteFileAtomic(a.out + ".cfg", res.Text());
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string manifest, out, chain = "rawboost";
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::Option *o_manifest = nullptr, *o_out = nullptr, *o_chain = nullptr,
              *o_seed = nullptr, *o_jobs = nullptr;
};

void RunAugment(AugmentArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "augment");
  res.String(a.o_manifest, "manifest", &a.manifest);
  res.String(a.o_out, "out", &a.out);
  res.Seed(a.o_seed, "seed", &a.seed);
  res.Int(a.o_jobs, "jobs", &a.jobs);
  res.String(a.o_chain, "chain", &a.chain);
  std::string series = "convolutive,impulsive,stationary";
  RawBoostParams rb;
  double mu = 255.0;
  int bits = 8;
  double speed_factor = 1.0;
  std::string mix_noise;
  double mix_snr_db = 10.0;
  std::string rir_path;
  res.String(nullptr, "rawboost.series", &series);
  res.Double(nullptr, "rawboost.snr_lo", &rb.snr_lo_db);
  res.Double(nullptr, "rawboost.snr_hi", &rb.snr_hi_db);
  res.Double(nullptr, "rawboost.impulse_prob", &rb.impulse_prob);
  res.Bool(nullptr, "rawboost.nonlinearity", &rb.nonlinearity);
  res.Double(nullptr, "mulaw.mu", &mu);
  res.Int(nullptr, "mulaw.bits", &bits);
  res.Double(nullptr, "speed.factor", &speed_factor);
  res.String(nullptr, "mix.noise", &mix_noise);
  res.Double(nullptr, "mix.snr_db", &mix_snr_db);
  res.String(nullptr, "rir.path", &rir_path);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.manifest, "--manifest");
  Require(a.out, "--out");
  RequireJobs(a.jobs);

  const std::vector<std::string> steps = SplitCsv(a.chain);
  if (steps.empty()) {
    throw Error(ErrorCode::kBadConfig, "augmentation chain is empty");
  }
  static constexpr std::string_view kKnownSteps[] = {"rawboost", "mulaw",
                                                     "speed", "mix", "rir"};
  std::unordered_set<std::string> seen_steps;
  for (const std::string& step : steps) {
    if (std::find(std::begin(kKnownSteps), std::end(kKnownSteps), step) ==
        std::end(kKnownSteps)) {
      throw Error(ErrorCode::kBadConfig, "unknown chain step: '" + step + "'");
    }
    if (!seen_steps.insert(step).second) {
      throw Error(ErrorCode::kBadConfig, "duplicate chain step: " + step);
    }
  }

  rb.series.clear();
  for (const std::string& name : SplitCsv(series)) {
    if (name == "convolutive") {
      rb.series.push_back(RawBoostAlgo::kConvolutive);
    } else if (name == "impulsive") {
      rb.series.push_back(RawBoostAlgo::kImpulsive);
    } else if (name == "stationary") {
      rb.series.push_back(RawBoostAlgo::kStationary);
    } else {
      throw Error(ErrorCode::kBadConfig,
                  "unknown rawboost algorithm: '" + name + "'");
    }
  }
  if (seen_steps.count("rawboost") > 0 && rb.series.empty()) {
    throw Error(ErrorCode::kBadConfig, "rawboost.series is empty");
  }

  Waveform noise, rir;
  if (seen_steps.count("mix") > 0) {
    Require(mix_noise, "mix.noise");
    noise = LoadWav(mix_noise);
  }
  if (seen_steps.count("rir") > 0) {
    Require(rir_path, "rir.path");
    rir = LoadWav(rir_path);
  }

  const std::vector<std::string> files = ReadManifest(a.manifest);
  const std::vector<std::string> stems = StemsOf(files);
  fs::create_directories(a.out);

  std::string chain_text;
  for (const std::string& step : steps) {
    if (!chain_text.empty()) chain_text += ',';
    chain_text += step;
  }

  ParallelFor(static_cast<std::int64_t>(files.size()), a.jobs,
              [&](std::int64_t i) {
                const std::size_t idx = static_cast<std::size_t>(i);
                Waveform w = LoadWav(files[idx]);
                const std::uint64_t file_seed = DeriveSeed(a.seed, stems[idx]);
                for (const std::string& step : steps) {
                  if (step == "rawboost") {
                    rb.Validate(static_cast<double>(w.sample_rate_hz));
                    w = RawBoost(w, rb, DeriveSeed(file_seed, "rawboost"));
                  } else if (step == "mulaw") {
                    w = MulawCodec(w, mu, bits);
                  } else if (step == "speed") {
                    w = SpeedPerturb(w, speed_factor);
                  } else if (step == "mix") {
                    w = MixAtSnr(w, noise, mix_snr_db);
                  } else {
                    w = ConvolveRir(w, rir);
                  }
                }
                SaveWav(PathUnder(a.out, stems[idx] + ".wav"), w);
                WriteFileAtomic(PathUnder(a.out, stems[idx] + ".prov"),
                                "source " + files[idx] + "\nchain " +
                                    chain_text + "\nseed " +
                                    std::to_string(file_seed) + "\n");
              });
  WriteFileAtomic(PathUnder(a.out, "resolved.cfg"), res.Text());
  *g.err << "n_files=" << files.size() << "\n";
}

// ---------------------------------------------------------------------------
// featurize

struct FeaturizeArgs {
  std::string manifest, out;
  int jobs = 1;
  CLI::Option *o_manifest = nullptr, *o_out = nullptr, *o_jobs = nullptr;
};

void RunFeaturize(FeaturizeArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "featurize");
  res.String(a.o_manifest, "manifest", &a.manifest);
  res.String(a.o_out, "out", &a.out);
  res.Int(a.o_jobs, "jobs", &a.jobs);
  std::string feature = "lfcc", window = "hamming";
  CepstralConfig feat_cfg;
  int deltas = 0;
  res.String(nullptr, "feature", &feature);
  res.Int(nullptr, "n_filters", &feat_cfg.n_filters);
  res.Int(nullptr, "n_ceps", &feat_cfg.n_ceps);
  res.Double(nullptr, "frame_len", &feat_cfg.frame.frame_len_sec);
  res.Double(nullptr, "frame_shift", &feat_cfg.frame.frame_shift_sec);
  res.String(nullptr, "window", &window);
  res.Int(nullptr, "deltas", &deltas);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.manifest, "--manifest");
  Require(a.out, "--out");
  RequireJobs(a.jobs);
  if (deltas < 0 || deltas > 2) {
    throw Error(ErrorCode::kBadConfig, "deltas must be 0, 1, or 2");
  }
  const FeatureKind kind = FeatureKindFromName(feature);
  feat_cfg.frame.window = WindowFromName(window);

  const std::vector<std::string> files = ReadManifest(a.manifest);
  const std::vector<std::string> stems = StemsOf(files);
  std::vector<std::size_t> order(files.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return stems[x] < stems[y];
  });

  std::vector<std::string> blocks(files.size());
  ParallelFor(static_cast<std::int64_t>(files.size()), a.jobs,
              [&](std::int64_t i) {
                const std::size_t idx = static_cast<std::size_t>(i);
                FeatureMatrix f =
                    CepstralFeatures(LoadWav(files[idx]), kind, feat_cfg);
                if (deltas > 0) f = AddDeltas(f, deltas);
                blocks[idx] = SerializeFeatureMatrix(stems[idx], f);
              });
  std::string all;
  for (std::size_t idx : order) all += blocks[idx];
  WriteFileAtomic(a.out, all);
  WriteFileAtomic(a.out + ".cfg", res.Text());
  *g.err << "n_files=" << files.size() << "\n";
}

// ---------------------------------------------------------------------------
// localize-eval

struct LocalizeArgs {
  std::string frame_scores, segments;
  double resolution = 0.02, threshold = 0.0;
  CLI::Option *o_frame_scores = nullptr, *o_segments = nullptr,
              *o_resolution = nullptr, *o_threshold = nullptr;
};

void RunLocalizeEval(LocalizeArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "localize-eval");
  bool flip = g.flip;
  res.String(a.o_frame_scores, "frame_scores", &a.frame_scores);
  res.String(a.o_segments, "segments", &a.segments);
  res.Double(a.o_resolution, "resolution", &a.resolution);
  res.Double(a.o_threshold, "threshold", &a.threshold);
  res.Bool(g.o_flip, "flip", &flip);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.frame_scores, "--frame-scores");
  Require(a.segments, "--segments");

  FrameScoreSet scores = ParseFrameScores(ReadFileToString(a.frame_scores));
  if (flip) {
    for (auto& [id, values] : scores.utts) {
      for (double& v : values) v = -v;
    }
  }
  const SegmentAnnotationSet annot =
      ParseSegmentAnnotations(ReadFileToString(a.segments));
  const FrameLabelSet labels =
      ExpandFrameLabels(annot, a.resolution, a.threshold);
  const PooledEerResult pooled = PooledPointEer(scores, labels);
  const PerUtteranceEerResult per = PerUtteranceEer(scores, labels);
  *g.out << "pooled_eer=" << FormatDouble(pooled.eer) << "\n"
         << "pooled_threshold=" << FormatDouble(pooled.threshold) << "\n"
         << "n_frames=" << pooled.n_frames << "\n"
         << "n_truncated_frames=" << pooled.n_truncated_frames << "\n"
         << "per_utt_eer=" << FormatDouble(per.mean_eer) << "\n"
         << "n_utts=" << per.n_utts << "\n"
         << "n_skipped_utts=" << per.n_skipped << "\n";
}

// ---------------------------------------------------------------------------
// det

struct DetArgs {
  std::string scores, key, out;
  CLI::Option *o_scores = nullptr, *o_key = nullptr, *o_out = nullptr;
};

void RunDet(DetArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "det");
  bool flip = g.flip;
  res.String(a.o_scores, "scores", &a.scores);
  res.String(a.o_key, "key", &a.key);
  res.String(a.o_out, "out", &a.out);
  res.Bool(g.o_flip, "flip", &flip);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.scores, "--scores");
  Require(a.key, "--key");
  Require(a.out, "--out");

  const ScoreSet scores = LoadScores(a.scores, ScoreSemantics::kRaw, flip);
  const TrialKey key = ParseTrialKey(ReadFileToString(a.key));
  const JoinedScores joined = JoinWithKey(scores, key);
  const std::vector<DetPoint> points =
      DetPoints(joined.bonafide, joined.spoof);
  WriteFileAtomic(a.out, SerializeDetPoints(points));
  WriteFileAtomic(a.out + ".cfg", res.Text());
  *g.err << "n_points=" << points.size() << "\n";
}

// ---------------------------------------------------------------------------
// rcq

struct RcqArgs {
  std::string maps, segments, speech, out;
  double window = 0.1;
  CLI::Option *o_maps = nullptr, *o_segments = nullptr, *o_speech = nullptr,
              *o_window = nullptr, *o_out = nullptr;
};

void RunRcq(RcqArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "rcq");
  res.String(a.o_maps, "maps", &a.maps);
  res.String(a.o_segments, "segments", &a.segments);
  res.String(a.o_speech, "speech", &a.speech);
  res.Double(a.o_window, "window", &a.window);
  res.String(a.o_out, "out", &a.out);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.maps, "--maps");
  Require(a.segments, "--segments");
  Require(a.speech, "--speech");

  const FrameScoreSet maps = ParseFrameScores(ReadFileToString(a.maps));
  const SegmentAnnotationSet spoof_annot =
      ParseSegmentAnnotations(ReadFileToString(a.segments));
  const SegmentAnnotationSet speech_annot = ParseSegmentAnnotations(
      ReadFileToString(a.speech), {"speech", "nonspeech"});
  const SegmentTypeLabelSet types = SegmentTypeLabels(
      spoof_annot, speech_annot, a.window, maps.resolution_sec);
  const RcqResult result = ComputeRcq(maps, types);
  const std::string text = FormatRcq(result);
  *g.out << text;
  *g.err << "global_mean=" << FormatDouble(result.global_mean) << "\n"
         << "n_frames=" << result.n_frames << "\n"
         << "n_truncated_frames=" << result.n_truncated_frames << "\n";
  if (!a.out.empty()) {
    WriteFileAtomic(a.out, text);
    WriteFileAtomic(a.out + ".cfg", res.Text());
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 1;
  CLI::Option *o_out = nullptr, *o_seed = nullptr, *o_jobs = nullptr;
};

void RunSynth(SynthArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "synth");
  SynthConfig sc;
  sc.seed = a.seed;
  res.String(a.o_out, "out", &a.out);
  res.Seed(a.o_seed, "seed", &sc.seed);
  res.Int(a.o_jobs, "jobs", &a.jobs);
  res.Int(nullptr, "n_utterances", &sc.n_utterances);
  res.Int(nullptr, "sample_rate", &sc.sample_rate_hz);
  res.Double(nullptr, "duration_lo", &sc.duration_lo_sec);
  res.Double(nullptr, "duration_hi", &sc.duration_hi_sec);
  res.Double(nullptr, "frac_bonafide", &sc.frac_bonafide);
  res.Double(nullptr, "frac_fake", &sc.frac_fake);
  res.Double(nullptr, "frac_partial", &sc.frac_partial);
  res.Double(nullptr, "bona_noise_pole", &sc.bona_noise_pole);
  res.Double(nullptr, "fake_noise_pole", &sc.fake_noise_pole);
  res.Double(nullptr, "f0_lo", &sc.f0_lo_hz);
  res.Double(nullptr, "f0_hi", &sc.f0_hi_hz);
  res.Double(nullptr, "tone_lo", &sc.fake_tone_lo_hz);
  res.Double(nullptr, "tone_hi", &sc.fake_tone_hi_hz);
  res.Int(nullptr, "splice_lo", &sc.splice_lo);
  res.Int(nullptr, "splice_hi", &sc.splice_hi);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.out, "--out");
  RequireJobs(a.jobs);

  const SynthCorpus corpus = GenerateCorpus(sc, a.jobs);
  const std::string wav_dir = PathUnder(a.out, "wav");
  fs::create_directories(wav_dir);
  for (const std::string& id : corpus.utt_order) {
    SaveWav(PathUnder(wav_dir, id + ".wav"), corpus.waves.at(id));
  }
  WriteFileAtomic(PathUnder(a.out, "key.txt"),
                  SerializeTrialKey(corpus.key));
  WriteFileAtomic(PathUnder(a.out, "segments.txt"),
                  SerializeSegmentAnnotations(corpus.segments));
  WriteFileAtomic(PathUnder(a.out, "resolved.cfg"), res.Text());
  *g.err << "n_written=" << corpus.utt_order.size() << "\n";
}

// ---------------------------------------------------------------------------
// toy-train

struct ToyTrainArgs {
  std::string corpus, split = "train", model;
  CLI::Option *o_corpus = nullptr, *o_split = nullptr, *o_model = nullptr;
};

void RunToyTrain(ToyTrainArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "toy-train");
  res.String(a.o_corpus, "corpus", &a.corpus);
  res.String(a.o_split, "split", &a.split);
  res.String(a.o_model, "model", &a.model);
  std::string window = "hamming";
  CepstralConfig feat_cfg;
  res.Int(nullptr, "n_filters", &feat_cfg.n_filters);
  res.Int(nullptr, "n_ceps", &feat_cfg.n_ceps);
  res.Double(nullptr, "frame_len", &feat_cfg.frame.frame_len_sec);
  res.Double(nullptr, "frame_shift", &feat_cfg.frame.frame_shift_sec);
  res.String(nullptr, "window", &window);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.corpus, "--corpus");
  Require(a.model, "--model");
  feat_cfg.frame.window = WindowFromName(window);

  SynthCorpus corpus;
  corpus.key = ParseTrialKey(ReadFileToString(PathUnder(a.corpus, "key.txt")));
  corpus.segments = ParseSegmentAnnotations(
      ReadFileToString(PathUnder(a.corpus, "segments.txt")));
  corpus.utt_order = KeyOrder(corpus.key);
  const std::vector<std::string> train_utts =
      PickSplit(corpus.utt_order, a.split);
  const std::string wav_dir = PathUnder(a.corpus, "wav");
  for (const std::string& id : train_utts) {
    corpus.waves[id] = LoadWav(PathUnder(wav_dir, id + ".wav"));
  }

  TrainReport report;
  const ToyDetector detector =
      TrainToyDetector(corpus, train_utts, feat_cfg, &report);
  *g.err << "n_train=" << train_utts.size() << "\n";
  ReportTraining(report, *g.err);
  WriteFileAtomic(a.model, SerializeToyDetector(detector));
  WriteFileAtomic(a.model + ".cfg", res.Text());
}

// ---------------------------------------------------------------------------
// toy-score

struct ToyScoreArgs {
  std::string corpus, model, mode = "pooled", split = "eval", out;
  double resolution = 0.02;
  int jobs = 1;
  CLI::Option *o_corpus = nullptr, *o_model = nullptr, *o_mode = nullptr,
              *o_split = nullptr, *o_resolution = nullptr, *o_out = nullptr,
              *o_jobs = nullptr;
};

void RunToyScore(ToyScoreArgs a, const GlobalArgs& g) {
  const RunConfig cfg = RunConfig::Load(g.config_path);
  Resolver res(cfg, "toy-score");
  res.String(a.o_corpus, "corpus", &a.corpus);
  res.String(a.o_model, "model", &a.model);
  res.String(a.o_mode, "mode", &a.mode);
  res.String(a.o_split, "split", &a.split);
  res.Double(a.o_resolution, "resolution", &a.resolution);
  res.String(a.o_out, "out", &a.out);
  res.Int(a.o_jobs, "jobs", &a.jobs);
  res.CheckKnown();
  *g.err << res.Text();
  Require(a.corpus, "--corpus");
  Require(a.model, "--model");
  Require(a.out, "--out");
  RequireJobs(a.jobs);
  if (a.mode != "pooled" && a.mode != "frame") {
    throw Error(ErrorCode::kBadConfig, "unknown mode: '" + a.mode + "'");
  }
  if (!(a.resolution > 0.0)) {
    throw Error(ErrorCode::kBadConfig, "resolution must be positive");
  }

  const TrialKey key =
      ParseTrialKey(ReadFileToString(PathUnder(a.corpus, "key.txt")));
  std::vector<std::string> utts = PickSplit(KeyOrder(key), a.split);
  std::sort(utts.begin(), utts.end());
  const ToyDetector detector = ParseToyDetector(ReadFileToString(a.model));
  const std::string wav_dir = PathUnder(a.corpus, "wav");

  if (a.mode == "pooled") {
    std::vector<double> scores(utts.size());
    ParallelFor(static_cast<std::int64_t>(utts.size()), a.jobs,
                [&](std::int64_t i) {
                  const std::size_t idx = static_cast<std::size_t>(i);
                  scores[idx] = ScoreUtterance(
                      detector, LoadWav(PathUnder(wav_dir, utts[idx] + ".wav")));
                });
    ScoreSet out_set;
    for (std::size_t i = 0; i < utts.size(); ++i) {
      out_set.index[utts[i]] = i;
      out_set.entries.push_back({utts[i], scores[i]});
    }
    WriteFileAtomic(a.out, SerializeScoreSet(out_set));
  } else {
    std::vector<std::vector<double>> rows(utts.size());
    ParallelFor(static_cast<std::int64_t>(utts.size()), a.jobs,
                [&](std::int64_t i) {
                  const std::size_t idx = static_cast<std::size_t>(i);
                  rows[idx] = FrameScoresAtResolution(
                      detector, LoadWav(PathUnder(wav_dir, utts[idx] + ".wav")),
                      a.resolution);
                });
    FrameScoreSet out_set;
    out_set.resolution_sec = a.resolution;
    out_set.utt_order = utts;
    for (std::size_t i = 0; i < utts.size(); ++i) {
      out_set.utts[utts[i]] = std::move(rows[i]);
    }
    WriteFileAtomic(a.out, SerializeFrameScores(out_set));
  }
  WriteFileAtomic(a.out + ".cfg", res.Text());
  *g.err << "n_scored=" << utts.size() << "\n";
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"fake speech detection toolkit", "defake"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersionLine);

  GlobalArgs g;
  g.out = &out;
  g.err = &err;
  g.o_config = app.add_option("--config", g.config_path,
                              "run configuration file ([section] key = value)");
  g.o_flip = app.add_flag(
      "--flip", g.flip, "input scores use the opposite sign convention");

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand(
      "eval", "detection metrics for a score file against a key");
  ev.o_scores = eval->add_option("--scores", ev.scores, "score file");
  ev.o_key = eval->add_option("--key", ev.key, "trial key file");
  ev.o_metrics = eval->add_option(
      "--metrics", ev.metrics, "comma list of eer, mindcf, actdcf, cllr");
  ev.o_ptarget =
      eval->add_option("--ptarget", ev.ptarget, "bona fide target prior");
  ev.o_cmiss = eval->add_option("--cmiss", ev.cmiss, "miss cost");
  ev.o_cfa = eval->add_option("--cfa", ev.cfa, "false alarm cost");
  ev.o_llr = eval->add_flag("--llr", ev.llr,
                            "scores are log likelihood ratios");
  ev.o_summary =
      eval->add_option("--summary", ev.summary, "also write results here");
  eval->callback([&] { RunEval(ev, g); });

  CalibrateArgs ca;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "fit an affine score-to-LLR mapping on dev scores");
  ca.o_dev_scores =
      calibrate->add_option("--dev-scores", ca.dev_scores, "dev score file");
  ca.o_dev_key =
      calibrate->add_option("--dev-key", ca.dev_key, "dev trial key");
  ca.o_eval_scores = calibrate->add_option("--eval-scores", ca.eval_scores,
                                           "scores to calibrate");
  ca.o_out_scores = calibrate->add_option("--out-scores", ca.out_scores,
                                          "calibrated score output");
  ca.o_prior =
      calibrate->add_option("--prior", ca.prior, "effective training prior");
  ca.o_model =
      calibrate->add_option("-o,--model", ca.model, "calibrator output");
  calibrate->callback([&] { RunCalibrate(ca, g); });

  FuseArgs fu;
  CLI::App* fuse =
      app.add_subcommand("fuse", "combine score files from several systems");
  fu.o_method = fuse->add_option("--method", fu.method, "avg or lr");
  fu.o_dev_scores = fuse->add_option("--dev-scores", fu.dev_scores,
                                     "dev score file per system");
  fu.o_dev_key = fuse->add_option("--dev-key", fu.dev_key, "dev trial key");
  fu.o_eval_scores = fuse->add_option("--eval-scores", fu.eval_scores,
                                      "eval score file per system");
  fu.o_prior = fuse->add_option("--prior", fu.prior, "effective prior (lr)");
  fu.o_out = fuse->add_option("-o,--out", fu.out, "fused score output");
  fuse->callback([&] { RunFuse(fu, g); });

  AugmentArgs au;
  CLI::App* augment = app.add_subcommand(
      "augment", "run an augmentation chain over a WAV manifest");
  au.o_manifest = augment->add_option("--manifest", au.manifest,
                                      "text file with one WAV path per line");
  au.o_out = augment->add_option("-o,--out", au.out, "output directory");
  au.o_chain = augment->add_option(
      "--chain", au.chain, "comma list of rawboost, mulaw, speed, mix, rir");
  au.o_seed = augment->add_option("--seed", au.seed, "base random seed");
  au.o_jobs = augment->add_option("--jobs", au.jobs, "worker threads");
  augment->callback([&] { RunAugment(au, g); });

  FeaturizeArgs fe;
  CLI::App* featurize = app.add_subcommand(
      "featurize", "extract cepstral features for a WAV manifest");
  fe.o_manifest = featurize->add_option("--manifest", fe.manifest,
                                        "text file with one WAV path per line");
  fe.o_out = featurize->add_option("-o,--out", fe.out, "feature output file");
  fe.o_jobs = featurize->add_option("--jobs", fe.jobs, "worker threads");
  featurize->callback([&] { RunFeaturize(fe, g); });

  LocalizeArgs lo;
  CLI::App* localize = app.add_subcommand(
      "localize-eval", "frame-level EER of frame scores against segments");
  lo.o_frame_scores = localize->add_option("--frame-scores", lo.frame_scores,
                                           "frame score file");
  lo.o_segments =
      localize->add_option("--segments", lo.segments, "segment annotations");
  lo.o_resolution =
      localize->add_option("--resolution", lo.resolution, "frame step (s)");
  lo.o_threshold = localize->add_option(
      "--threshold", lo.threshold, "spoof overlap fraction that flips a frame");
  localize->callback([&] { RunLocalizeEval(lo, g); });

  DetArgs de;
  CLI::App* det = app.add_subcommand(
      "det", "DET curve in probit coordinates for plotting");
  de.o_scores = det->add_option("--scores", de.scores, "score file");
  de.o_key = det->add_option("--key", de.key, "trial key file");
  de.o_out = det->add_option("-o,--out", de.out, "DET point output");
  det->callback([&] { RunDet(de, g); });

  RcqArgs rc;
  CLI::App* rcq = app.add_subcommand(
      "rcq", "relevance concentration per segment type");
  rc.o_maps = rcq->add_option("--maps", rc.maps, "relevance map file");
  rc.o_segments =
      rcq->add_option("--segments", rc.segments, "bonafide/spoof segments");
  rc.o_speech =
      rcq->add_option("--speech", rc.speech, "speech/nonspeech segments");
  rc.o_window = rcq->add_option("--window", rc.window,
                                "half width (s) of the boundary zone");
  rc.o_out = rcq->add_option("-o,--out", rc.out, "also write the table here");
  rcq->callback([&] { RunRcq(rc, g); });

  SynthArgs sy;
  CLI::App* synth = app.add_subcommand(
      "synth", "generate a labeled synthetic detection corpus");
  sy.o_out = synth->add_option("-o,--out", sy.out, "corpus output directory");
  sy.o_seed = synth->add_option("--seed", sy.seed, "corpus seed");
  sy.o_jobs = synth->add_option("--jobs", sy.jobs, "worker threads");
  synth->callback([&] { RunSynth(sy, g); });

  ToyTrainArgs tt;
  CLI::App* toy_train = app.add_subcommand(
      "toy-train", "train the toy frame detector on a synthetic corpus");
  tt.o_corpus =
      toy_train->add_option("--corpus", tt.corpus, "corpus directory");
  tt.o_split = toy_train->add_option("--split", tt.split,
                                     "train, dev, eval, or all");
  tt.o_model = toy_train->add_option("-o,--model", tt.model, "model output");
  toy_train->callback([&] { RunToyTrain(tt, g); });

  ToyScoreArgs ts;
  CLI::App* toy_score = app.add_subcommand(
      "toy-score", "score a synthetic corpus with a toy detector model");
  ts.o_corpus =
      toy_score->add_option("--corpus", ts.corpus, "corpus directory");
  ts.o_model = toy_score->add_option("--model", ts.model, "model file");
  ts.o_mode = toy_score->add_option("--mode", ts.mode, "pooled or frame");
  ts.o_split = toy_score->add_option("--split", ts.split,
                                     "train, dev, eval, or all");
  ts.o_resolution = toy_score->add_option("--resolution", ts.resolution,
                                          "frame mode step (s)");
  ts.o_out = toy_score->add_option("-o,--out", ts.out, "score output file");
  ts.o_jobs = toy_score->add_option("--jobs", ts.jobs, "worker threads");
  toy_score->callback([&] { RunToyScore(ts, g); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kBadConfig ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace defake
