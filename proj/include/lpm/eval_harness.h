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

// Evaluation protocol: per-speaker enrollment from one session's near-mic
// recordings, testing on every other recording of the enrolled phrases plus
// all aggressor (out-of-set) speech, and aggregation into accuracy, macro
// precision/recall and false detection rate.

#ifndef LPM_EVAL_HARNESS_H_
#define LPM_EVAL_HARNESS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpm/audio_frontend.h"
#include "lpm/dtw.h"
#include "lpm/embedding_runtime.h"
#include "lpm/manifest.h"
#include "lpm/matcher.h"

namespace lpm {

enum class ConditionBucket : std::uint8_t {
  kSameNear = 0,  // training session, near (or unspecified) mic
  kSameFar = 1,   // training session, far mic
  kOther = 2,     // any other session
  kAggressor = 3,
};
inline constexpr std::size_t kNumInDomainBuckets = 3;

std::string_view ConditionName(ConditionBucket bucket);

struct TrialSpec {
  // Empty: per speaker, the session with the most near/unspecified phrase
  // recordings (ties broken by the smallest session id).
  std::string train_session;
  // 0 enrolls every eligible phrase.
  std::size_t n_phrases = 0;
  std::size_t n_templates_per_phrase = 2;
  double alpha = kDefaultAlpha;
  DecisionRule rule = DecisionRule::kLiteral;
  // Evaluation (not enrollment) audio is mixed with noise_path at snr_db.
  double snr_db = kNoNoise;
  std::string noise_path;
  std::uint64_t seed = 0;
  // Skip speakers without enough enrollment data instead of failing.
  bool skip_insufficient_speakers = false;
};

// Deterministic phrase sampler: mt19937_64 seeded with
// seed ^ fnv1a64(speaker), partial Fisher-Yates over `candidates` (as given)
// with rejection-sampled bounded draws, result sorted.
std::vector<std::string> SamplePhrases(std::vector<std::string> candidates,
                                       std::size_t n, std::uint64_t seed,
                                       std::string_view speaker);

// Uniform integer in [0, range): draws x until x >= 2^64 mod range, then
// returns x % range.
std::uint64_t BoundedDraw(std::mt19937_64 &engine, std::uint64_t range);

std::uint64_t Fnv1a64(std::string_view text);

struct EvalEngine {
  const Embedder *embedder = nullptr;
  EmbedOptions embed_options;
  DtwConfig dtw;
  // Defaults to LoadAudio.
  std::function<AudioClip(const std::string &)> load_audio;
};

// Engine plus a cache of trimmed embeddings keyed by (path, noise, snr,
// seed). Thread-safe.
class EvalContext {
 public:
  explicit EvalContext(EvalEngine engine);

  const EvalEngine &engine() const { return engine_; }

  // nullopt when the utterance has no detectable speech or is shorter than
  // one analysis window.
  std::optional<FeatureMatrix> Embedding(const std::string &path,
                                         double snr_db = kNoNoise,
                                         const std::string &noise_path = "",
                                         std::uint64_t seed = 0);

 private:
  const AudioClip &Noise(const std::string &path);

  EvalEngine engine_;
  std::mutex mu_;
  std::map<std::string, std::optional<FeatureMatrix>> cache_;
  std::map<std::string, AudioClip> noise_;
};

struct Prediction {
  std::string audio_path;
  std::string truth;  // kAggressorPhrase for out-of-set speech
  ConditionBucket condition = ConditionBucket::kSameNear;
  bool detected = false;
  std::string predicted;  // empty when rejected
  double best_score = 0.0;
};

struct TrialResult {
  std::string speaker;
  std::uint64_t seed = 0;
  std::string train_session;
  std::vector<std::string> enrolled_phrases;
  std::vector<Prediction> predictions;
};

// One TrialResult per speaker. Throws kInsufficientData naming the speaker
// (and phrase where relevant).
std::vector<TrialResult> RunTrial(std::span<const ManifestEntry> manifest,
                                  const TrialSpec &spec, EvalContext &context);

// Trials k = 0..n-1 with seed spec.seed + k, concatenated.
std::vector<TrialResult> RunTrials(std::span<const ManifestEntry> manifest,
                                   const TrialSpec &spec, std::size_t trials,
                                   EvalContext &context);

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one value
  std::size_t count = 0;
};

struct Counts {
  std::size_t correct = 0;
  std::size_t wrong = 0;
  std::size_t rejected = 0;
  std::size_t in_domain = 0;
  std::size_t aggressor_detected = 0;
  std::size_t aggressor_total = 0;

  Counts &operator+=(const Counts &o);
};

// Metrics of one speaker: per-trial values averaged over that speaker's
// trials. Unavailable metrics (no aggressors, empty condition) are nullopt.
struct SpeakerReport {
  std::string speaker;
  std::size_t trials = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::optional<double> fdr;
  std::array<std::optional<double>, kNumInDomainBuckets> condition_accuracy;
  Counts counts;
};

struct EvalReport {
  std::vector<SpeakerReport> speakers;  // sorted by speaker id
  // Mean and standard deviation across speakers.
  MetricStats accuracy, precision, recall, fdr;
  std::array<MetricStats, kNumInDomainBuckets> condition_accuracy;
  Counts totals;
};

// Accuracy = correct / in-domain (rejections count as errors). Precision
// and recall are macro-averaged over the enrolled phrases that have test
// utterances; a phrase never predicted has precision 0. FDR = detected
// aggressors / aggressors. Aggregation: trial -> speaker mean -> mean and
// stddev across speakers. Throws kNoInDomainPredictions.
EvalReport ComputeMetrics(std::span<const TrialResult> results);

enum class SweepAxis { kNumPhrases, kSnrDb, kAlpha };

std::string_view SweepAxisName(SweepAxis axis);
// "n" | "n_phrases", "snr" | "snr_db", "alpha". Throws kInvalidArgument.
SweepAxis ParseSweepAxis(std::string_view name);

struct SweepPoint {
  double value = 0.0;
  EvalReport report;
};

// One report per value; trial k uses seed base.seed + k at every value so
// utterance sets and noise segments are paired across values. Errors are
// re-thrown with the axis value attached.
std::vector<SweepPoint> Sweep(std::span<const ManifestEntry> manifest,
                              const TrialSpec &base, SweepAxis axis,
                              std::span<const double> values,
                              std::size_t trials, EvalContext &context);

// CSV with one row per sweep value (or a single row for a plain run).
void WriteSweepCsv(std::ostream &os, SweepAxis axis,
                   std::span<const SweepPoint> points);
void WriteSpeakerCsv(std::ostream &os, SweepAxis axis,
                     std::span<const SweepPoint> points);
// Human-readable summary that also declares protocol choices.
void WriteSummary(std::ostream &os, const TrialSpec &base, std::size_t trials,
                  SweepAxis axis, std::span<const SweepPoint> points);
// Accuracy mean +/- stddev against the axis value, as an SVG line chart.
void WriteSweepSvg(std::ostream &os, SweepAxis axis,
                   std::span<const SweepPoint> points);

std::string FormatNumber(double v);

}  // namespace lpm

#endif  // LPM_EVAL_HARNESS_H_
