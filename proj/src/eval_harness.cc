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

#include "lpm/eval_harness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "lpm/error.h"

namespace lpm {
namespace {

bool EnrollmentMic(MicCondition mic) { return mic != MicCondition::kFar; }

std::string ChooseTrainSession(std::span<const ManifestEntry *const> entries) {
  std::map<std::string, std::size_t> counts;
  for (const ManifestEntry *e : entries) {
    if (!e->is_aggressor() && EnrollmentMic(e->mic)) ++counts[e->session];
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto &[session, n] : counts) {
    if (n > best_count) {
      best = session;
      best_count = n;
    }
  }
  return best;
}

MetricStats Stats(const std::vector<double> &values) {
  MetricStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

double Mean(const std::vector<double> &v) { return Stats(v).mean; }

struct TrialMetrics {
  double accuracy = 0.0, precision = 0.0, recall = 0.0;
  std::optional<double> fdr;
  std::array<std::optional<double>, kNumInDomainBuckets> condition;
  Counts counts;
};

TrialMetrics ScoreTrial(const TrialResult &trial) {
  TrialMetrics m;
  std::map<std::string, std::size_t> truth_count, predicted_count, hits;
  std::array<std::size_t, kNumInDomainBuckets> bucket_total{}, bucket_hit{};
  for (const Prediction &p : trial.predictions) {
    if (p.condition == ConditionBucket::kAggressor) {
      ++m.counts.aggressor_total;
      if (p.detected) ++m.counts.aggressor_detected;
      continue;
    }
    const auto b = static_cast<std::size_t>(p.condition);
    ++m.counts.in_domain;
    ++bucket_total[b];
    ++truth_count[p.truth];
    if (!p.detected) {
      ++m.counts.rejected;
      continue;
    }
    ++predicted_count[p.predicted];
    if (p.predicted == p.truth) {
      ++m.counts.correct;
      ++hits[p.truth];
      ++bucket_hit[b];
    } else {
      ++m.counts.wrong;
    }
  }
  if (m.counts.in_domain > 0) {
    m.accuracy = static_cast<double>(m.counts.correct) /
                 static_cast<double>(m.counts.in_domain);
  }
  std::vector<double> precisions, recalls;
  for (const std::string &phrase : trial.enrolled_phrases) {
    const std::size_t n = truth_count[phrase];
    if (n == 0) continue;
    const std::size_t tp = hits[phrase];
    const std::size_t predicted = predicted_count[phrase];
    recalls.push_back(static_cast<double>(tp) / static_cast<double>(n));
    precisions.push_back(predicted == 0 ? 0.0
                                        : static_cast<double>(tp) /
                                              static_cast<double>(predicted));
  }
  m.precision = Mean(precisions);
  m.recall = Mean(recalls);
  if (m.counts.aggressor_total > 0) {
    m.fdr = static_cast<double>(m.counts.aggressor_detected) /
            static_cast<double>(m.counts.aggressor_total);
  }
  for (std::size_t b = 0; b < kNumInDomainBuckets; ++b) {
    if (bucket_total[b] > 0) {
      m.condition[b] = static_cast<double>(bucket_hit[b]) /
                       static_cast<double>(bucket_total[b]);
    }
  }
  return m;
}

std::optional<double> MeanOfPresent(
    const std::vector<std::optional<double>> &values) {
  std::vector<double> present;
  for (const auto &v : values) {
    if (v) present.push_back(*v);
  }
  if (present.empty()) return std::nullopt;
  return Mean(present);
}

std::string Cell(const std::optional<double> &v) {
  return v ? FormatNumber(*v) : std::string();
}

std::string Cell(const MetricStats &s, bool mean) {
  if (s.count == 0) return {};
  return FormatNumber(mean ? s.mean : s.stddev);
}

}  // namespace

std::string_view ConditionName(ConditionBucket bucket) {
  switch (bucket) {
    case ConditionBucket::kSameNear: return "same_near";
    case ConditionBucket::kSameFar: return "same_far";
    case ConditionBucket::kOther: return "other";
    case ConditionBucket::kAggressor: return "aggressor";
  }
  return "other";
}

std::uint64_t Fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t BoundedDraw(std::mt19937_64 &engine, std::uint64_t range) {
  if (range == 0) {
    throw LpmError(ErrorCode::kInvalidArgument, "empty draw range");
  }
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % range;
  }
}

std::vector<std::string> SamplePhrases(std::vector<std::string> candidates,
                                       std::size_t n, std::uint64_t seed,
                                       std::string_view speaker) {
  if (n > candidates.size()) {
    throw LpmError(ErrorCode::kInsufficientData,
                   "speaker '" + std::string(speaker) + "': " +
                       std::to_string(n) + " phrases requested, " +
                       std::to_string(candidates.size()) + " eligible");
  }
  std::mt19937_64 engine(seed ^ Fnv1a64(speaker));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + BoundedDraw(engine, candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(n);
  std::sort(candidates.begin(), candidates.end());
  return candidates;
}

EvalContext::EvalContext(EvalEngine engine) : engine_(std::move(engine)) {
  if (!engine_.embedder) {
    throw LpmError(ErrorCode::kInvalidArgument, "EvalEngine needs an embedder");
  }
  if (!engine_.load_audio) engine_.load_audio = LoadAudio;
}

const AudioClip &EvalContext::Noise(const std::string &path) {
  std::lock_guard lock(mu_);
  auto it = noise_.find(path);
  if (it == noise_.end()) {
    it = noise_.emplace(path, engine_.load_audio(path)).first;
  }
  return it->second;
}

std::optional<FeatureMatrix> EvalContext::Embedding(
    const std::string &path, double snr_db, const std::string &noise_path,
    std::uint64_t seed) {
  const bool noisy = snr_db != kNoNoise;
  if (noisy && noise_path.empty()) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "a finite SNR needs a noise file");
  }
  const std::string key =
      noisy ? path + '\x1f' + noise_path + '\x1f' + FormatNumber(snr_db) +
                  '\x1f' + std::to_string(seed)
            : path;
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }

  AudioClip clip = engine_.load_audio(path);
  if (noisy) {
    const AudioClip &noise = Noise(noise_path);
    std::mt19937_64 engine(seed ^ Fnv1a64(path) ^ 0x9e3779b97f4a7c15ull);
    const std::size_t offset = BoundedDraw(engine, noise.samples.size());
    clip = MixNoiseAtSnr(clip, noise, snr_db, offset).clip;
  }
  std::optional<FeatureMatrix> result;
  try {
    result = EmbedUtterance(*engine_.embedder, clip, engine_.embed_options)
                 .frames;
  } catch (const LpmError &e) {
    if (e.code() != ErrorCode::kNoSpeechDetected &&
        e.code() != ErrorCode::kTooShort) {
      throw;
    }
  }
  std::lock_guard lock(mu_);
  return cache_.emplace(key, std::move(result)).first->second;
}

std::vector<TrialResult> RunTrial(std::span<const ManifestEntry> manifest,
                                  const TrialSpec &spec, EvalContext &context) {
  if (spec.n_templates_per_phrase < 2) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "at least 2 templates per phrase are required");
  }
  std::map<std::string, std::vector<const ManifestEntry *>> by_speaker;
  for (const auto &e : manifest) by_speaker[e.speaker].push_back(&e);
  // Predictions come out in canonical order whatever the input order.
  for (auto &[speaker, list] : by_speaker) {
    std::sort(list.begin(), list.end(), [](const auto *a, const auto *b) {
      return std::tie(a->phrase, a->session, a->repetition, a->mic,
                      a->audio_path) < std::tie(b->phrase, b->session,
                                                b->repetition, b->mic,
                                                b->audio_path);
    });
  }

  std::vector<TrialResult> results;
  for (const auto &[speaker, entries] : by_speaker) {
    TrialResult trial;
    trial.speaker = speaker;
    trial.seed = spec.seed;
    trial.train_session =
        spec.train_session.empty() ? ChooseTrainSession(entries)
                                   : spec.train_session;

    // Enrollment candidates: training session, near mic, lowest reps first.
    std::map<std::string, std::vector<const ManifestEntry *>> enrollable;
    for (const ManifestEntry *e : entries) {
      if (!e->is_aggressor() && e->session == trial.train_session &&
          EnrollmentMic(e->mic)) {
        enrollable[e->phrase].push_back(e);
      }
    }
    std::vector<std::string> eligible;
    for (auto &[phrase, list] : enrollable) {
      std::sort(list.begin(), list.end(), [](const auto *a, const auto *b) {
        return std::tie(a->repetition, a->audio_path) <
               std::tie(b->repetition, b->audio_path);
      });
      if (list.size() >= spec.n_templates_per_phrase) eligible.push_back(phrase);
    }
    const std::size_t n =
        spec.n_phrases == 0 ? eligible.size() : spec.n_phrases;
    if (eligible.empty() || n > eligible.size()) {
      if (spec.skip_insufficient_speakers) continue;
      throw LpmError(ErrorCode::kInsufficientData,
                     "speaker '" + speaker + "' session '" +
                         trial.train_session + "': " +
                         std::to_string(eligible.size()) +
                         " phrase(s) with " +
                         std::to_string(spec.n_templates_per_phrase) +
                         " near-mic recordings, " + std::to_string(n) +
                         " requested");
    }
    trial.enrolled_phrases = SamplePhrases(eligible, n, spec.seed, speaker);

    std::set<const ManifestEntry *> enrolled_entries;
    std::vector<LabeledEmbedding> templates;
    for (const std::string &phrase : trial.enrolled_phrases) {
      const auto &list = enrollable[phrase];
      for (std::size_t k = 0; k < spec.n_templates_per_phrase; ++k) {
        auto emb = context.Embedding(list[k]->audio_path);
        if (!emb) {
          throw LpmError(ErrorCode::kInsufficientData,
                         "speaker '" + speaker + "' phrase '" + phrase +
                             "': no speech in enrollment recording " +
                             list[k]->audio_path);
        }
        templates.push_back({phrase, std::move(*emb)});
        enrolled_entries.insert(list[k]);
      }
    }
    const PhraseSet set =
        Enroll(templates, spec.alpha, context.engine().dtw,
               context.engine().embedder->backend());

    const std::set<std::string> selected(trial.enrolled_phrases.begin(),
                                         trial.enrolled_phrases.end());
    for (const ManifestEntry *e : entries) {
      if (enrolled_entries.count(e)) continue;
      Prediction p;
      p.audio_path = e->audio_path;
      p.truth = e->phrase;
      if (e->is_aggressor()) {
        p.condition = ConditionBucket::kAggressor;
      } else if (!selected.count(e->phrase)) {
        continue;
      } else if (e->session != trial.train_session) {
        p.condition = ConditionBucket::kOther;
      } else {
        p.condition = e->mic == MicCondition::kFar ? ConditionBucket::kSameFar
                                                   : ConditionBucket::kSameNear;
      }
      const auto query = context.Embedding(e->audio_path, spec.snr_db,
                                           spec.noise_path, spec.seed);
      if (!query) {
        p.best_score = std::numeric_limits<double>::infinity();
      } else {
        const DetectionResult r = Detect(set, *query, spec.rule);
        p.detected = r.detected;
        p.predicted = r.label;
        p.best_score = r.best_score;
      }
      trial.predictions.push_back(std::move(p));
    }
    results.push_back(std::move(trial));
  }
  if (results.empty()) {
    throw LpmError(ErrorCode::kInsufficientData,
                   "no speaker has enough enrollment data");
  }
  return results;
}

std::vector<TrialResult> RunTrials(std::span<const ManifestEntry> manifest,
                                   const TrialSpec &spec, std::size_t trials,
                                   EvalContext &context) {
  std::vector<TrialResult> all;
  for (std::size_t k = 0; k < trials; ++k) {
    TrialSpec s = spec;
    s.seed = spec.seed + k;
    auto r = RunTrial(manifest, s, context);
    std::move(r.begin(), r.end(), std::back_inserter(all));
  }
  return all;
}

Counts &Counts::operator+=(const Counts &o) {
  correct += o.correct;
  wrong += o.wrong;
  rejected += o.rejected;
  in_domain += o.in_domain;
  aggressor_detected += o.aggressor_detected;
  aggressor_total += o.aggressor_total;
  return *this;
}

EvalReport ComputeMetrics(std::span<const TrialResult> results) {
  std::map<std::string, std::vector<TrialMetrics>> per_speaker;
  std::size_t in_domain = 0;
  for (const TrialResult &t : results) {
    TrialMetrics m = ScoreTrial(t);
    in_domain += m.counts.in_domain;
    per_speaker[t.speaker].push_back(std::move(m));
  }
  if (in_domain == 0) {
    throw LpmError(ErrorCode::kNoInDomainPredictions,
                   "no in-domain predictions to score");
  }

  EvalReport report;
  std::vector<double> acc, prec, rec, fdr;
  std::array<std::vector<double>, kNumInDomainBuckets> cond;
  for (const auto &[speaker, trials] : per_speaker) {
    SpeakerReport s;
    s.speaker = speaker;
    s.trials = trials.size();
    std::vector<double> a, p, r;
    std::vector<std::optional<double>> f;
    std::array<std::vector<std::optional<double>>, kNumInDomainBuckets> c;
    for (const TrialMetrics &m : trials) {
      // A trial without in-domain test utterances says nothing about
      // accuracy, precision or recall.
      if (m.counts.in_domain > 0) {
        a.push_back(m.accuracy);
        p.push_back(m.precision);
        r.push_back(m.recall);
      }
      f.push_back(m.fdr);
      for (std::size_t b = 0; b < kNumInDomainBuckets; ++b) {
        c[b].push_back(m.condition[b]);
      }
      s.counts += m.counts;
    }
    s.fdr = MeanOfPresent(f);
    for (std::size_t b = 0; b < kNumInDomainBuckets; ++b) {
      s.condition_accuracy[b] = MeanOfPresent(c[b]);
      if (s.condition_accuracy[b]) cond[b].push_back(*s.condition_accuracy[b]);
    }
    if (!a.empty()) {
      s.accuracy = Mean(a);
      s.precision = Mean(p);
      s.recall = Mean(r);
      acc.push_back(s.accuracy);
      prec.push_back(s.precision);
      rec.push_back(s.recall);
    }
    if (s.fdr) fdr.push_back(*s.fdr);
    report.totals += s.counts;
    report.speakers.push_back(std::move(s));
  }
  report.accuracy = Stats(acc);
  report.precision = Stats(prec);
  report.recall = Stats(rec);
  report.fdr = Stats(fdr);
  for (std::size_t b = 0; b < kNumInDomainBuckets; ++b) {
    report.condition_accuracy[b] = Stats(cond[b]);
  }
  return report;
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNumPhrases: return "n_phrases";
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kAlpha: return "alpha";
  }
  return "alpha";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  if (name == "n" || name == "n_phrases") return SweepAxis::kNumPhrases;
  if (name == "snr" || name == "snr_db") return SweepAxis::kSnrDb;
  if (name == "alpha") return SweepAxis::kAlpha;
  throw LpmError(ErrorCode::kInvalidArgument,
                 "unknown sweep axis '" + std::string(name) +
                     "' (n | snr | alpha)");
}

std::vector<SweepPoint> Sweep(std::span<const ManifestEntry> manifest,
                              const TrialSpec &base, SweepAxis axis,
                              std::span<const double> values,
                              std::size_t trials, EvalContext &context) {
  if (values.empty()) {
    throw LpmError(ErrorCode::kInvalidArgument, "sweep needs values");
  }
  std::vector<SweepPoint> points;
  for (double v : values) {
    TrialSpec spec = base;
    switch (axis) {
      case SweepAxis::kNumPhrases:
        if (!(v >= 1.0) || v != std::floor(v)) {
          throw LpmError(ErrorCode::kInvalidArgument,
                         "n_phrases values must be positive integers");
        }
        spec.n_phrases = static_cast<std::size_t>(v);
        break;
      case SweepAxis::kSnrDb:
        spec.snr_db = v;
        break;
      case SweepAxis::kAlpha:
        spec.alpha = v;
        break;
    }
    try {
      const auto results = RunTrials(manifest, spec, trials, context);
      points.push_back({v, ComputeMetrics(results)});
    } catch (const LpmError &e) {
      throw LpmError(e.code(), std::string(SweepAxisName(axis)) + "=" +
                                   FormatNumber(v) + ": " + e.message());
    }
  }
  return points;
}

std::string FormatNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void WriteSweepCsv(std::ostream &os, SweepAxis axis,
                   std::span<const SweepPoint> points) {
  os << "axis,value,speakers,accuracy_mean,accuracy_std,precision_mean,"
        "precision_std,recall_mean,recall_std,fdr_mean,fdr_std,"
        "same_near_mean,same_near_std,same_far_mean,same_far_std,"
        "other_mean,other_std,correct,wrong,rejected,in_domain,"
        "aggressor_detected,aggressor_total\n";
  for (const SweepPoint &p : points) {
    const EvalReport &r = p.report;
    os << SweepAxisName(axis) << ',' << FormatNumber(p.value) << ','
       << r.speakers.size();
    for (const MetricStats *s : {&r.accuracy, &r.precision, &r.recall, &r.fdr,
                                 &r.condition_accuracy[0],
                                 &r.condition_accuracy[1],
                                 &r.condition_accuracy[2]}) {
      os << ',' << Cell(*s, true) << ',' << Cell(*s, false);
    }
    const Counts &c = r.totals;
    os << ',' << c.correct << ',' << c.wrong << ',' << c.rejected << ','
       << c.in_domain << ',' << c.aggressor_detected << ','
       << c.aggressor_total << '\n';
  }
}

void WriteSpeakerCsv(std::ostream &os, SweepAxis axis,
                     std::span<const SweepPoint> points) {
  os << "axis,value,speaker,trials,accuracy,precision,recall,fdr,same_near,"
        "same_far,other,correct,wrong,rejected,in_domain,aggressor_detected,"
        "aggressor_total\n";
  for (const SweepPoint &p : points) {
    for (const SpeakerReport &s : p.report.speakers) {
      os << SweepAxisName(axis) << ',' << FormatNumber(p.value) << ','
         << s.speaker << ',' << s.trials << ',' << FormatNumber(s.accuracy)
         << ',' << FormatNumber(s.precision) << ','
         << FormatNumber(s.recall) << ',' << Cell(s.fdr);
      for (const auto &c : s.condition_accuracy) os << ',' << Cell(c);
      const Counts &c = s.counts;
      os << ',' << c.correct << ',' << c.wrong << ',' << c.rejected << ','
         << c.in_domain << ',' << c.aggressor_detected << ','
         << c.aggressor_total << '\n';
    }
  }
}

void WriteSummary(std::ostream &os, const TrialSpec &base, std::size_t trials,
                  SweepAxis axis, std::span<const SweepPoint> points) {
  os << "# phrase recognition evaluation\n"
     << "enrollment: " << base.n_templates_per_phrase
     << " near-mic templates per phrase from "
     << (base.train_session.empty() ? std::string("the best-covered session")
                                    : "session " + base.train_session)
     << "\n"
     << "decision rule: "
     << (base.rule == DecisionRule::kLiteral ? "literal" : "strict") << "\n"
     << "trials: " << trials << " (seeds " << base.seed << ".."
     << base.seed + (trials ? trials - 1 : 0) << ")\n"
     << "accuracy: correct / in-domain, rejections count as errors\n"
     << "precision/recall: macro over enrolled phrases\n"
     << "aggregation: trial -> speaker mean -> mean +/- stddev over speakers\n";
  auto line = [&os](const char *name, const MetricStats &s) {
    os << "  " << name << ": ";
    if (s.count == 0) {
      os << "n/a\n";
    } else {
      os << FormatNumber(s.mean) << " +/- " << FormatNumber(s.stddev) << "\n";
    }
  };
  for (const SweepPoint &p : points) {
    os << "\n[" << SweepAxisName(axis) << " = " << FormatNumber(p.value)
       << "] speakers: " << p.report.speakers.size() << "\n";
    line("accuracy", p.report.accuracy);
    line("precision", p.report.precision);
    line("recall", p.report.recall);
    line("fdr", p.report.fdr);
    line("accuracy same (near)", p.report.condition_accuracy[0]);
    line("accuracy same (far)", p.report.condition_accuracy[1]);
    line("accuracy other", p.report.condition_accuracy[2]);
  }
}

void WriteSweepSvg(std::ostream &os, SweepAxis axis,
                   std::span<const SweepPoint> points) {
  constexpr double kW = 480, kH = 320, kLeft = 60, kRight = 20, kTop = 20,
                   kBottom = 50;
  const double plot_w = kW - kLeft - kRight, plot_h = kH - kTop - kBottom;
  const std::size_t n = points.size();
  auto x_at = [&](std::size_t i) {
    return kLeft + (n <= 1 ? plot_w / 2
                           : plot_w * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
  };
  auto y_at = [&](double v) {
    return kTop + plot_h * (1.0 - std::clamp(v, 0.0, 1.0));
  };
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
     << "\" height=\"" << kH << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop + plot_h, kLeft + plot_w, kTop + plot_h);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                "stroke=\"black\"/>\n",
                kLeft, kTop, kLeft, kTop + plot_h);
  os << buf;
  for (double tick : {0.0, 0.5, 1.0}) {
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                  "text-anchor=\"end\">%.1f</text>\n",
                  kLeft - 6, y_at(tick) + 4, tick);
    os << buf;
  }
  std::string path;
  for (std::size_t i = 0; i < n; ++i) {
    const MetricStats &s = points[i].report.accuracy;
    const double x = x_at(i);
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"steelblue\"/>\n",
                  x, y_at(s.mean - s.stddev), x, y_at(s.mean + s.stddev));
    os << buf;
    std::snprintf(buf, sizeof(buf), "%s%.1f,%.1f", i ? " " : "", x,
                  y_at(s.mean));
    path += buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  x, kTop + plot_h + 16, FormatNumber(points[i].value).c_str());
    os << buf;
  }
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" "
        "points=\""
     << path << "\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                "text-anchor=\"middle\">%s</text>\n",
                kLeft + plot_w / 2, kH - 10,
                std::string(SweepAxisName(axis)).c_str());
  os << buf << "<text x=\"14\" y=\"" << kTop + plot_h / 2
     << "\" font-size=\"12\" transform=\"rotate(-90 14 " << kTop + plot_h / 2
     << ")\" text-anchor=\"middle\">accuracy</text>\n</svg>\n";
}

}  // namespace lpm
