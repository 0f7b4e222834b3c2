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

#ifndef LPM_MATCHER_H_
#define LPM_MATCHER_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpm/dtw.h"
#include "lpm/embedding_runtime.h"
#include "lpm/feature_matrix.h"

namespace lpm {

inline constexpr double kDefaultAlpha = 1.25;
// alpha = infinity turns the detector into a nearest-template classifier.
inline constexpr double kClassificationAlpha =
    std::numeric_limits<double>::infinity();

struct PhraseTemplate {
  std::string label;
  FeatureMatrix embedding;  // matching-ready, float32-valued
  double threshold = 0.0;   // tau

  bool operator==(const PhraseTemplate &) const = default;
};

struct PhraseSet {
  std::vector<PhraseTemplate> templates;
  double alpha = kDefaultAlpha;
  DtwConfig dtw;
  BackendId backend;

  std::size_t feature_dim() const {
    return templates.empty() ? 0 : templates.front().embedding.cols();
  }
  bool operator==(const PhraseSet &) const = default;
};

struct LabeledEmbedding {
  std::string label;
  FeatureMatrix frames;  // trimmed embedding sequence
};

// Canonical form used for every template and query. Values are rounded to
// float32; under the cosine metric each frame is first divided by its
// largest absolute value. The cosine distance ignores per-frame scale, and
// for float32 inputs the division makes the canonical frames identical
// after any global rescaling, so scores are bit-identical under rescaling.
FeatureMatrix PrepareForMatching(const FeatureMatrix &frames,
                                 LocalMetric metric);

// tau_i = alpha * max_{j != i, label_j == label_i} DTW(Z_i, Z_j); infinite
// when alpha is infinite. Template order follows `utterances`.
// Throws kInsufficientTemplates (names the label), kEmptyEmbedding,
// kDimensionMismatch, kInvalidArgument (alpha not > 0).
PhraseSet Enroll(std::span<const LabeledEmbedding> utterances,
                 double alpha = kDefaultAlpha, const DtwConfig &config = {},
                 const BackendId &backend = SpectralBackendId());

enum class DecisionRule : std::uint8_t {
  // Detected iff some template j has d_j < tau_j; label from the argmin.
  kLiteral = 0,
  // Detected iff the argmin template itself has d < tau.
  kStrict = 1,
};

struct DetectionResult {
  bool detected = false;
  std::string label;  // empty when rejected
  double best_score = 0.0;
  std::size_t best_template_index = 0;  // ties -> lowest index
  std::vector<double> per_template_scores;

  bool operator==(const DetectionResult &) const = default;
};

// Throws kEmptyPhraseSet, kEmptySequence, kDimensionMismatch.
DetectionResult Detect(const PhraseSet &set, const FeatureMatrix &query,
                       DecisionRule rule = DecisionRule::kLiteral,
                       std::size_t max_threads = 0);

}  // namespace lpm

#endif  // LPM_MATCHER_H_
