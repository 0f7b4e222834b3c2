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

#include "lpm/matcher.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "lpm/error.h"

namespace lpm {

FeatureMatrix PrepareForMatching(const FeatureMatrix &frames,
                                 LocalMetric metric) {
  FeatureMatrix out = frames;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    double scale = 1.0;
    if (metric == LocalMetric::kCosine) {
      double peak = 0.0;
      for (double v : row) peak = std::max(peak, std::abs(v));
      if (peak > 0.0) scale = peak;
    }
    for (double &v : row) v = static_cast<float>(v / scale);
  }
  return out;
}

PhraseSet Enroll(std::span<const LabeledEmbedding> utterances, double alpha,
                 const DtwConfig &config, const BackendId &backend) {
  if (!(alpha > 0.0)) {
    throw LpmError(ErrorCode::kInvalidArgument, "alpha must be > 0");
  }
  if (utterances.empty()) {
    throw LpmError(ErrorCode::kInsufficientTemplates, "nothing to enroll");
  }
  std::map<std::string, std::vector<std::size_t>> by_label;
  const std::size_t dim = utterances.front().frames.cols();
  for (std::size_t i = 0; i < utterances.size(); ++i) {
    const auto &u = utterances[i];
    if (u.frames.empty() || u.frames.cols() == 0) {
      throw LpmError(ErrorCode::kEmptyEmbedding,
                     "template " + std::to_string(i) + " ('" + u.label +
                         "') has no frames");
    }
    if (u.frames.cols() != dim) {
      throw LpmError(ErrorCode::kDimensionMismatch,
                     "template " + std::to_string(i) + " has dim " +
                         std::to_string(u.frames.cols()) + ", expected " +
                         std::to_string(dim));
    }
    by_label[u.label].push_back(i);
  }
  for (const auto &[label, members] : by_label) {
    if (members.size() < 2) {
      throw LpmError(ErrorCode::kInsufficientTemplates,
                     "phrase '" + label + "' has " +
                         std::to_string(members.size()) +
                         " recording(s); at least 2 are required");
    }
  }

  PhraseSet set;
  set.alpha = alpha;
  set.dtw = config;
  set.backend = backend;
  set.templates.reserve(utterances.size());
  for (const auto &u : utterances) {
    set.templates.push_back(
        {u.label, PrepareForMatching(u.frames, config.metric), 0.0});
  }

  std::vector<double> max_peer(utterances.size(), 0.0);
  for (const auto &[label, members] : by_label) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const std::size_t i = members[a], j = members[b];
        const double d = DtwDistance(set.templates[i].embedding,
                                     set.templates[j].embedding, config);
        max_peer[i] = std::max(max_peer[i], d);
        max_peer[j] = std::max(max_peer[j], d);
      }
    }
  }
  for (std::size_t i = 0; i < set.templates.size(); ++i) {
    set.templates[i].threshold =
        std::isinf(alpha) ? kClassificationAlpha : alpha * max_peer[i];
  }
  return set;
}

DetectionResult Detect(const PhraseSet &set, const FeatureMatrix &query,
                       DecisionRule rule, std::size_t max_threads) {
  if (set.templates.empty()) {
    throw LpmError(ErrorCode::kEmptyPhraseSet, "phrase set has no templates");
  }
  if (query.empty()) {
    throw LpmError(ErrorCode::kEmptySequence, "query has no frames");
  }
  if (query.cols() != set.feature_dim()) {
    throw LpmError(ErrorCode::kDimensionMismatch,
                   "query dim " + std::to_string(query.cols()) +
                       ", phrase set dim " +
                       std::to_string(set.feature_dim()));
  }
  const FeatureMatrix prepared = PrepareForMatching(query, set.dtw.metric);
  std::vector<const FeatureMatrix *> refs;
  refs.reserve(set.templates.size());
  for (const auto &t : set.templates) refs.push_back(&t.embedding);

  DetectionResult result;
  result.per_template_scores = DtwOneToMany(
      prepared, std::span<const FeatureMatrix *const>(refs), set.dtw,
      max_threads);
  const auto &scores = result.per_template_scores;
  std::size_t best = 0;
  bool any_below = false;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (scores[j] < scores[best]) best = j;
    if (scores[j] < set.templates[j].threshold) any_below = true;
  }
  result.best_template_index = best;
  result.best_score = scores[best];
  result.detected = rule == DecisionRule::kLiteral
                        ? any_below
                        : scores[best] < set.templates[best].threshold;
  if (result.detected) result.label = set.templates[best].label;
  return result;
}

}  // namespace lpm
