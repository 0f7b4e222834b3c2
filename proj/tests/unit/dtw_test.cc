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

#include "lpm/dtw.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "lpm/error.h"
#include "oracles.h"
#include "test_support.h"

namespace lpm {
namespace {

using testing::OracleDtw;
using testing::RandomMatrix;

FeatureMatrix Rows(std::vector<std::vector<double>> rows) {
  FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

TEST(FrameDistanceTest, CosineExamples) {
  const std::vector<double> x{1, 0}, y{0, 1}, u{1, 1}, v{2, 2}, z{0, 0};
  EXPECT_EQ(FrameDistance(x, x, LocalMetric::kCosine), 0.0);
  EXPECT_DOUBLE_EQ(FrameDistance(x, y, LocalMetric::kCosine), 1.0);
  EXPECT_NEAR(FrameDistance(u, v, LocalMetric::kCosine), 0.0, 1e-15);
  EXPECT_EQ(FrameDistance(z, z, LocalMetric::kCosine), 0.0);
  EXPECT_EQ(FrameDistance(z, x, LocalMetric::kCosine), 1.0);
  EXPECT_EQ(FrameDistance(x, z, LocalMetric::kCosine), 1.0);
}

TEST(FrameDistanceTest, Euclidean) {
  const std::vector<double> a{0, 3}, b{4, 0};
  EXPECT_DOUBLE_EQ(FrameDistance(a, b, LocalMetric::kEuclidean), 5.0);
}

TEST(FrameDistanceTest, DimensionMismatch) {
  const std::vector<double> a{1, 0}, b{1, 0, 0};
  try {
    FrameDistance(a, b, LocalMetric::kCosine);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(DtwTest, MatchesPathEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(1, 6), dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t f = dim(rng);
    const FeatureMatrix a = RandomMatrix(len(rng), f, rng);
    const FeatureMatrix b = RandomMatrix(len(rng), f, rng);
    for (const bool cosine : {true, false}) {
      for (const bool normalize : {true, false}) {
        DtwConfig cfg;
        cfg.metric = cosine ? LocalMetric::kCosine : LocalMetric::kEuclidean;
        cfg.normalize_by_path_length = normalize;
        EXPECT_NEAR(DtwDistance(a, b, cfg), OracleDtw(a, b, cosine, normalize),
                    1e-9);
      }
    }
  }
}

TEST(DtwTest, BandedMatchesBandedEnumeration) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> len(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const FeatureMatrix a = RandomMatrix(len(rng), 3, rng);
    const FeatureMatrix b = RandomMatrix(len(rng), 3, rng);
    const std::size_t gap = a.rows() > b.rows() ? a.rows() - b.rows()
                                                : b.rows() - a.rows();
    const std::size_t radius = std::max<std::size_t>(1, gap);
    DtwConfig cfg;
    cfg.band_radius = radius;
    EXPECT_NEAR(DtwDistance(a, b, cfg), OracleDtw(a, b, true, true, radius),
                1e-9);
  }
}

TEST(DtwTest, SelfDistanceIsZero) {
  std::mt19937_64 rng(13);
  const FeatureMatrix a = RandomMatrix(17, 5, rng);
  EXPECT_EQ(DtwDistance(a, a), 0.0);
  DtwConfig euclid;
  euclid.metric = LocalMetric::kEuclidean;
  EXPECT_EQ(DtwDistance(a, a, euclid), 0.0);
}

TEST(DtwTest, SingleCell) {
  EXPECT_DOUBLE_EQ(DtwDistance(Rows({{1, 0}}), Rows({{0, 1}})), 1.0);
}

TEST(DtwTest, NormalizationDividesByCellsOnPath) {
  // Diagonal path of 3 cells, each costing 1 (orthogonal frames).
  const FeatureMatrix a = Rows({{1, 0}, {1, 0}, {1, 0}});
  const FeatureMatrix b = Rows({{0, 1}, {0, 1}, {0, 1}});
  DtwConfig raw;
  raw.normalize_by_path_length = false;
  EXPECT_DOUBLE_EQ(DtwDistance(a, b, raw), 3.0);
  EXPECT_DOUBLE_EQ(DtwDistance(a, b), 1.0);
}

TEST(DtwTest, SymmetricAndNonNegative) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const FeatureMatrix a = RandomMatrix(1 + trial % 23, 6, rng);
    const FeatureMatrix b = RandomMatrix(1 + (trial * 7) % 19, 6, rng);
    for (auto metric : {LocalMetric::kCosine, LocalMetric::kEuclidean}) {
      DtwConfig cfg;
      cfg.metric = metric;
      const double ab = DtwDistance(a, b, cfg);
      EXPECT_GE(ab, 0.0);
      EXPECT_NEAR(ab, DtwDistance(b, a, cfg), 1e-12);
    }
  }
}

TEST(DtwTest, WideBandEqualsUnbanded) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureMatrix a = RandomMatrix(3 + trial % 11, 4, rng);
    const FeatureMatrix b = RandomMatrix(2 + trial % 13, 4, rng);
    DtwConfig banded;
    banded.band_radius = std::max(a.rows(), b.rows());
    EXPECT_EQ(DtwDistance(a, b, banded), DtwDistance(a, b));
  }
}

TEST(DtwTest, DoubledFramesStillAlignAtZeroCost) {
  std::mt19937_64 rng(16);
  const FeatureMatrix a = RandomMatrix(9, 4, rng);
  FeatureMatrix stretched(18, 4);
  for (std::size_t r = 0; r < 18; ++r) {
    for (std::size_t c = 0; c < 4; ++c) stretched(r, c) = a(r / 2, c);
  }
  for (auto metric : {LocalMetric::kCosine, LocalMetric::kEuclidean}) {
    DtwConfig cfg;
    cfg.metric = metric;
    EXPECT_LE(DtwDistance(stretched, a, cfg), 1e-9);
  }
}

TEST(DtwTest, Errors) {
  const FeatureMatrix a = Rows({{1, 0}, {0, 1}, {1, 1}, {1, 0}});
  const FeatureMatrix b = Rows({{1, 0}});
  auto code_of = [](auto &&fn) {
    try {
      fn();
    } catch (const LpmError &e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of([&] { DtwDistance(FeatureMatrix(0, 2), b); }),
            ErrorCode::kEmptySequence);
  EXPECT_EQ(code_of([&] { DtwDistance(a, Rows({{1, 0, 0}})); }),
            ErrorCode::kDimensionMismatch);
  DtwConfig narrow;
  narrow.band_radius = 2;
  EXPECT_EQ(code_of([&] { DtwDistance(a, b, narrow); }),
            ErrorCode::kBandTooNarrow);
  narrow.band_radius = 3;
  EXPECT_NO_THROW(DtwDistance(a, b, narrow));
}

TEST(DtwOneToManyTest, Examples) {
  const FeatureMatrix q = Rows({{1, 0}, {1, 0}});
  const std::vector<FeatureMatrix> refs{q, Rows({{0, 1}})};
  const auto scores = DtwOneToMany(q, refs);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_EQ(scores[0], 0.0);
  EXPECT_DOUBLE_EQ(scores[1], 1.0);
}

TEST(DtwOneToManyTest, EqualsSerialForAnyThreadCount) {
  std::mt19937_64 rng(17);
  const FeatureMatrix q = RandomMatrix(20, 8, rng);
  std::vector<FeatureMatrix> refs;
  for (int k = 0; k < 13; ++k) refs.push_back(RandomMatrix(5 + k, 8, rng));
  std::vector<double> serial;
  for (const auto &r : refs) serial.push_back(DtwDistance(q, r));
  for (std::size_t threads : {1u, 2u, 3u, 8u, 0u}) {
    EXPECT_EQ(DtwOneToMany(q, refs, {}, threads), serial);
  }
  std::vector<const FeatureMatrix *> ptrs;
  for (const auto &r : refs) ptrs.push_back(&r);
  EXPECT_EQ(DtwOneToMany(q, ptrs, {}, 4), serial);
}

TEST(DtwOneToManyTest, ErrorNamesReference) {
  std::mt19937_64 rng(18);
  const FeatureMatrix q = RandomMatrix(4, 3, rng);
  std::vector<FeatureMatrix> refs{RandomMatrix(4, 3, rng),
                                  RandomMatrix(4, 2, rng)};
  try {
    DtwOneToMany(q, refs);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
    EXPECT_NE(std::string(e.what()).find("reference 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace lpm
