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

#ifndef LPM_DTW_H_
#define LPM_DTW_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lpm/feature_matrix.h"

namespace lpm {

enum class LocalMetric : std::uint8_t { kCosine = 0, kEuclidean = 1 };

// Steps are always the symmetric unit-weight set {(1,1), (1,0), (0,1)}.
struct DtwConfig {
  LocalMetric metric = LocalMetric::kCosine;
  bool normalize_by_path_length = true;
  // Sakoe-Chiba band: cell (i, j) is admissible iff |i - j| <= radius.
  std::optional<std::size_t> band_radius;

  bool operator==(const DtwConfig &) const = default;
};

// Cosine distance is 1 - <a,b> / sqrt(|a|^2 |b|^2), clamped at 0. Two zero
// vectors are at distance 0, zero vs nonzero at distance 1.
// Throws kDimensionMismatch.
double FrameDistance(std::span<const double> a, std::span<const double> b,
                     LocalMetric metric);

// Minimum cumulative local distance over monotone paths from (0, 0) to
// (t_a - 1, t_b - 1). Among equal-cost paths the shortest is chosen; when
// normalizing, the cost is divided by the number of cells on that path.
// Uses O(min(t_a, t_b)) memory.
// Throws kEmptySequence, kDimensionMismatch, kBandTooNarrow.
double DtwDistance(const FeatureMatrix &a, const FeatureMatrix &b,
                   const DtwConfig &config = {});

// Element k equals DtwDistance(query, refs[k], config). Work is split across
// up to `max_threads` threads (0 = hardware concurrency); results do not
// depend on the split. Errors name the offending reference index.
std::vector<double> DtwOneToMany(const FeatureMatrix &query,
                                 std::span<const FeatureMatrix> refs,
                                 const DtwConfig &config = {},
                                 std::size_t max_threads = 0);
std::vector<double> DtwOneToMany(const FeatureMatrix &query,
                                 std::span<const FeatureMatrix *const> refs,
                                 const DtwConfig &config = {},
                                 std::size_t max_threads = 0);

}  // namespace lpm

#endif  // LPM_DTW_H_
