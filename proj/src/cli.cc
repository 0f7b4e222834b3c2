// Copyright (c) 2026 The LPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpm/cli.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lpm/audio_frontend.h"
#include "lpm/embedding_runtime.h"
#include "lpm/error.h"
#include "lpm/eval_harness.h"
#include "lpm/manifest.h"
#include "lpm/matcher.h"
#include "lpm/phrase_set_io.h"

namespace lpm {
namespace {

using nlohmann::json;

constexpr char kEnrollFormat[] = "lpm.enroll.v1";
constexpr char kDetectFormat[] = "lpm.detect.v1";
constexpr char kEvalFormat[] = "lpm.eval.v1";

struct CliConfig {
  std::string backend = "spectral";
  std::string weights;
  std::string alpha = "1.25";
  std::string rule = "literal";
  std::string metric = "cosine";
  std::size_t band = 0;
  bool no_normalize = false;
  double sad_threshold = 0.5;
  std::string trim = "boundary";
  std::uint64_t seed = 0;
  std::string out;

  // enroll
  std::vector<std::string> items;
  // detect
  std::string set_path;
  std::vector<std::string> queries;
  // eval
  std::string manifest;
  std::size_t trials = 1;
  std::size_t n_phrases = 0;
  std::size_t templates = 2;
  std::string train_session;
  std::string noise;
  std::string snr = "inf";
  std::string sweep;
  bool chart = false;
  bool skip_insufficient = false;
};

double ParseReal(const std::string &text, const std::string &what) {
  if (text == "inf" || text == "infinity" || text == "+inf") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos == text.size() && !std::isnan(v)) return v;
  } catch (const std::exception &) {
  }
  throw LpmError(ErrorCode::kInvalidArgument,
                 what + ": cannot parse '" + text + "'");
}

void AddFrontendOptions(CLI::App *app, CliConfig &cfg) {
  app->add_option("--backend", cfg.backend, "Phrase representation")
      ->check(CLI::IsMember({"spectral", "kws"}));
  app->add_option("--weights", cfg.weights,
                  std::string("LPMW keyword-model weights (default $") +
                      kWeightsEnvVar + ")");
  app->add_option("--sad-threshold", cfg.sad_threshold,
                  "Speech-activity threshold used for trimming")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--trim", cfg.trim, "Silence trimming")
      ->check(CLI::IsMember({"boundary", "all"}));
}

void AddMatcherOptions(CLI::App *app, CliConfig &cfg) {
  app->add_option("--alpha", cfg.alpha, "Threshold scale (number or inf)");
  app->add_option("--metric", cfg.metric, "DTW local distance")
      ->check(CLI::IsMember({"cosine", "euclidean"}));
  app->add_option("--band", cfg.band, "Sakoe-Chiba band radius (0 = none)");
  app->add_flag("--no-normalize", cfg.no_normalize,
                "Do not divide DTW cost by path length");
}

void AddRuleOption(CLI::App *app, CliConfig &cfg) {
  app->add_option("--rule", cfg.rule, "Detection rule")
      ->check(CLI::IsMember({"literal", "strict"}));
}

std::unique_ptr<Embedder> MakeEmbedder(CliConfig &cfg) {
  if (cfg.weights.empty()) {
    if (const char *env = std::getenv(kWeightsEnvVar)) cfg.weights = env;
  }
  if (cfg.backend == "kws") {
    if (cfg.weights.empty()) {
      throw LpmError(ErrorCode::kInvalidArgument,
                     std::string("--backend kws needs --weights or $") +
                         kWeightsEnvVar);
    }
    return KwsEmbedder::FromFile(cfg.weights);
  }
  return std::make_unique<SpectralEmbedder>();
}

EmbedOptions MakeEmbedOptions(const CliConfig &cfg) {
  EmbedOptions o;
  o.sad_threshold = cfg.sad_threshold;
  o.trim_mode =
      cfg.trim == "all" ? TrimMode::kAllNonSpeech : TrimMode::kBoundary;
  return o;
}

DtwConfig MakeDtwConfig(const CliConfig &cfg) {
  DtwConfig d;
  d.metric = cfg.metric == "euclidean" ? LocalMetric::kEuclidean
                                       : LocalMetric::kCosine;
  d.normalize_by_path_length = !cfg.no_normalize;
  if (cfg.band > 0) d.band_radius = cfg.band;
  return d;
}

DecisionRule MakeRule(const CliConfig &cfg) {
  return cfg.rule == "strict" ? DecisionRule::kStrict : DecisionRule::kLiteral;
}

json Number(double v) {
  if (std::isfinite(v)) return v;
  return FormatNumber(v);
}

int CmdEnroll(CliConfig &cfg, std::ostream &out, std::ostream &err) {
  const auto embedder = MakeEmbedder(cfg);
  const EmbedOptions options = MakeEmbedOptions(cfg);
  std::vector<LabeledEmbedding> utterances;
  for (const std::string &item : cfg.items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw LpmError(ErrorCode::kInvalidArgument,
                     "expected LABEL=PATH, got '" + item + "'");
    }
    const std::string label = item.substr(0, eq);
    const std::string path = item.substr(eq + 1);
    try {
      utterances.push_back(
          {label, EmbedUtterance(*embedder, LoadAudio(path), options).frames});
    } catch (const LpmError &e) {
      throw LpmError(e.code(), path + ": " + e.message());
    }
  }
  const PhraseSet set =
      Enroll(utterances, ParseReal(cfg.alpha, "--alpha"), MakeDtwConfig(cfg),
             embedder->backend());
  SavePhraseSet(set, cfg.out);
  for (std::size_t i = 0; i < set.templates.size(); ++i) {
    const auto &t = set.templates[i];
    out << json{{"format", kEnrollFormat},
                {"template", i},
                {"label", t.label},
                {"frames", t.embedding.rows()},
                {"tau", Number(t.threshold)}}
               .dump()
        << '\n';
  }
  err << "enrolled " << set.templates.size() << " templates into " << cfg.out
      << '\n';
  return 0;
}

int CmdDetect(CliConfig &cfg, std::ostream &out, std::ostream &) {
  const auto embedder = MakeEmbedder(cfg);
  const PhraseSet set = LoadPhraseSet(cfg.set_path, &embedder->backend());
  const EmbedOptions options = MakeEmbedOptions(cfg);
  const DecisionRule rule = MakeRule(cfg);
  for (const std::string &path : cfg.queries) {
    json line{{"format", kDetectFormat},
              {"query", path},
              {"rule", cfg.rule}};
    std::optional<FeatureMatrix> query;
    try {
      query = EmbedUtterance(*embedder, LoadAudio(path), options).frames;
    } catch (const LpmError &e) {
      if (e.code() != ErrorCode::kNoSpeechDetected) {
        throw LpmError(e.code(), path + ": " + e.message());
      }
    }
    if (!query) {
      line["decision"] = "rejected";
      line["reason"] = "no_speech";
      out << line.dump() << '\n';
      continue;
    }
    const DetectionResult r = Detect(set, *query, rule);
    line["decision"] = r.detected ? "detected" : "rejected";
    line["label"] = r.detected ? json(r.label) : json(nullptr);
    line["best_score"] = r.best_score;
    line["best_template"] = r.best_template_index;
    line["nearest_label"] = set.templates[r.best_template_index].label;
    line["scores"] = r.per_template_scores;
    out << line.dump() << '\n';
  }
  return 0;
}

int CmdEval(CliConfig &cfg, std::ostream &out, std::ostream &err) {
  const auto embedder = MakeEmbedder(cfg);
  const auto manifest = LoadManifest(cfg.manifest);

  TrialSpec spec;
  spec.train_session = cfg.train_session;
  spec.n_phrases = cfg.n_phrases;
  spec.n_templates_per_phrase = cfg.templates;
  spec.alpha = ParseReal(cfg.alpha, "--alpha");
  spec.rule = MakeRule(cfg);
  spec.snr_db = ParseReal(cfg.snr, "--snr");
  spec.noise_path = cfg.noise;
  spec.seed = cfg.seed;
  spec.skip_insufficient_speakers = cfg.skip_insufficient;

  SweepAxis axis = SweepAxis::kAlpha;
  std::vector<double> values{spec.alpha};
  if (!cfg.sweep.empty()) {
    const auto eq = cfg.sweep.find('=');
    if (eq == std::string::npos) {
      throw LpmError(ErrorCode::kInvalidArgument,
                     "--sweep expects axis=v1,v2,...");
    }
    axis = ParseSweepAxis(cfg.sweep.substr(0, eq));
    values.clear();
    std::stringstream ss(cfg.sweep.substr(eq + 1));
    for (std::string tok; std::getline(ss, tok, ',');) {
      values.push_back(ParseReal(tok, "--sweep"));
    }
  }

  EvalEngine engine;
  engine.embedder = embedder.get();
  engine.embed_options = MakeEmbedOptions(cfg);
  engine.dtw = MakeDtwConfig(cfg);
  EvalContext context(std::move(engine));
  const auto points =
      Sweep(manifest, spec, axis, values, cfg.trials, context);

  auto open = [](const std::string &path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw LpmError(ErrorCode::kIoError, "cannot write " + path);
    return os;
  };
  {
    auto os = open(cfg.out + ".csv");
    WriteSweepCsv(os, axis, points);
  }
  {
    auto os = open(cfg.out + "_speakers.csv");
    WriteSpeakerCsv(os, axis, points);
  }
  {
    auto os = open(cfg.out + ".txt");
    WriteSummary(os, spec, cfg.trials, axis, points);
  }
  if (cfg.chart) {
    auto os = open(cfg.out + ".svg");
    WriteSweepSvg(os, axis, points);
  }

  auto stat = [](const MetricStats &s) -> json {
    return s.count ? json(s.mean) : json(nullptr);
  };
  for (const SweepPoint &p : points) {
    const EvalReport &r = p.report;
    out << json{{"format", kEvalFormat},
                {"axis", SweepAxisName(axis)},
                {"value", FormatNumber(p.value)},
                {"speakers", r.speakers.size()},
                {"accuracy", stat(r.accuracy)},
                {"accuracy_std", r.accuracy.stddev},
                {"precision", stat(r.precision)},
                {"recall", stat(r.recall)},
                {"fdr", stat(r.fdr)},
                {"rejected", r.totals.rejected},
                {"in_domain", r.totals.in_domain}}
               .dump()
        << '\n';
  }
  err << "wrote " << cfg.out << ".csv, " << cfg.out << "_speakers.csv, "
      << cfg.out << ".txt" << (cfg.chart ? ", " + cfg.out + ".svg" : "")
      << '\n';
  return 0;
}

}  // namespace

int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Personalized phrase recognition by latent template matching"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto *enroll = app.add_subcommand("enroll", "Enroll phrase recordings");
  AddFrontendOptions(enroll, cfg);
  AddMatcherOptions(enroll, cfg);
  enroll->add_option("--out", cfg.out, "Phrase-set file to write")
      ->required();
  enroll->add_option("recordings", cfg.items, "LABEL=WAV, >= 2 per label")
      ->required();

  auto *detect = app.add_subcommand("detect", "Match queries to a phrase set");
  AddFrontendOptions(detect, cfg);
  AddRuleOption(detect, cfg);
  detect->add_option("--set", cfg.set_path, "Phrase-set file")->required();
  detect->add_option("queries", cfg.queries, "Query WAV files")->required();

  auto *eval = app.add_subcommand("eval", "Run the evaluation protocol");
  AddFrontendOptions(eval, cfg);
  AddMatcherOptions(eval, cfg);
  AddRuleOption(eval, cfg);
  eval->add_option("--manifest", cfg.manifest, "JSON Lines manifest")
      ->required();
  eval->add_option("--out", cfg.out, "Output prefix for report files")
      ->required();
  eval->add_option("--trials", cfg.trials, "Trials per setting");
  eval->add_option("--n-phrases", cfg.n_phrases,
                   "Phrases enrolled per speaker (0 = all)");
  eval->add_option("--templates", cfg.templates, "Templates per phrase");
  eval->add_option("--train-session", cfg.train_session,
                   "Enrollment session (default: best covered)");
  eval->add_option("--noise", cfg.noise, "Noise WAV for SNR conditions");
  eval->add_option("--snr", cfg.snr, "Evaluation SNR in dB (inf = clean)");
  eval->add_option("--seed", cfg.seed, "Base seed");
  eval->add_option("--sweep", cfg.sweep, "axis=v1,v2 with axis n|snr|alpha");
  eval->add_flag("--chart", cfg.chart, "Also write an SVG chart");
  eval->add_flag("--skip-insufficient", cfg.skip_insufficient,
                 "Skip speakers without enough enrollment data");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    if (enroll->parsed()) return CmdEnroll(cfg, out, err);
    if (detect->parsed()) return CmdDetect(cfg, out, err);
    return CmdEval(cfg, out, err);
  } catch (const LpmError &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace lpm
