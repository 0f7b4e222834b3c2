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

#include "lpm/model_weights.h"

#include <gtest/gtest.h>

#include <cmath>

#include "lpm/binary_io.h"
#include "lpm/error.h"
#include "test_support.h"

namespace lpm {
namespace {

using testing::MakeRandomWeightFile;
using testing::RandomModelOptions;
using testing::TempDir;

RandomModelOptions SmallModel() {
  RandomModelOptions o;
  o.metadata.embed_dim = 8;
  o.metadata.vocab_size = 5;
  o.hidden_dim = 6;
  return o;
}

ErrorCode DecodeError(const std::vector<std::uint8_t> &bytes) {
  try {
    ModelWeights::FromFile(DecodeWeightFile(bytes));
  } catch (const LpmError &e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return ErrorCode::kIoError;
}

TEST(ModelWeightsTest, LoadsCompleteManifest) {
  TempDir dir;
  const WeightFile file = MakeRandomWeightFile(SmallModel());
  WriteWeightFile(file, dir.File("m.lpmw"));
  const ModelWeights w = LoadWeights(dir.File("m.lpmw"));
  EXPECT_EQ(w.metadata().num_blocks, 6u);
  EXPECT_EQ(w.hidden_dim(), 6u);
  EXPECT_EQ(w.output_dim(), 8u);
  ASSERT_EQ(w.blocks().size(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(w.blocks()[i].dilated.dilation, i + 1);
    EXPECT_EQ(w.blocks()[i].dilated.kernel, 5u);
    EXPECT_EQ(w.blocks()[i].pointwise.kernel, 1u);
  }
}

TEST(ModelWeightsTest, EncodeDecodeRoundTrip) {
  const WeightFile file = MakeRandomWeightFile(SmallModel());
  const WeightFile back = DecodeWeightFile(EncodeWeightFile(file));
  EXPECT_EQ(back.metadata, file.metadata);
  EXPECT_EQ(back.tensors, file.tensors);
}

TEST(ModelWeightsTest, TapSelectsOutputWidth) {
  RandomModelOptions o = SmallModel();
  o.metadata.tap_id = 3;
  EXPECT_EQ(ModelWeights::FromFile(MakeRandomWeightFile(o)).output_dim(), 6u);
  o.metadata.tap_id = 7;
  try {
    ModelWeights::FromFile(MakeRandomWeightFile(o));
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
}

TEST(ModelWeightsTest, WrongKernelWidthNamesTensor) {
  WeightFile file = MakeRandomWeightFile(SmallModel());
  for (auto &[name, t] : file.tensors) {
    if (name == "blocks.2.conv1.weight") {
      t.dims[2] = 3;
      t.data.resize(t.numel());
    }
  }
  try {
    ModelWeights::FromFile(file);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("blocks.2.conv1.weight"),
              std::string::npos);
  }
}

TEST(ModelWeightsTest, MissingAndUnknownTensors) {
  WeightFile missing = MakeRandomWeightFile(SmallModel());
  missing.tensors.pop_back();
  try {
    ModelWeights::FromFile(missing);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("head.bias"), std::string::npos);
  }
  WeightFile extra = MakeRandomWeightFile(SmallModel());
  extra.tensors.emplace_back("blocks.9.conv1.bias", Tensor{{6}, std::vector<float>(6)});
  try {
    ModelWeights::FromFile(extra);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    EXPECT_NE(std::string(e.what()).find("blocks.9.conv1.bias"),
              std::string::npos);
  }
}

TEST(ModelWeightsTest, FoldWithUnitDirectionIsExact) {
  // Rows of v already have unit norm, so the folded kernel is g * v.
  Tensor v{{2, 1, 2}, {0.6f, 0.8f, 1.0f, 0.0f}};
  Tensor g{{2}, {2.5f, -3.0f}};
  const Tensor k = FoldWeightNorm(v, g);
  EXPECT_EQ(k.dims, v.dims);
  EXPECT_EQ(k.data, (std::vector<float>{1.5f, 2.0f, -3.0f, 0.0f}));
}

TEST(ModelWeightsTest, FoldNormalizesPerOutputChannel) {
  Tensor v{{2, 2, 1}, {3.0f, 4.0f, 0.0f, 0.0f}};
  Tensor g{{2}, {10.0f, 1.0f}};
  const Tensor k = FoldWeightNorm(v, g);
  EXPECT_FLOAT_EQ(k.data[0], 6.0f);
  EXPECT_FLOAT_EQ(k.data[1], 8.0f);
  EXPECT_EQ(k.data[2], 0.0f);
  EXPECT_EQ(k.data[3], 0.0f);
}

TEST(ModelWeightsTest, WeightNormPairsAreFoldedAtLoad) {
  RandomModelOptions o = SmallModel();
  o.weight_norm = true;
  const WeightFile file = MakeRandomWeightFile(o);
  const ModelWeights w = ModelWeights::FromFile(file);
  const Tensor *v = nullptr, *g = nullptr;
  for (const auto &[name, t] : file.tensors) {
    if (name == "blocks.0.conv1.weight_v") v = &t;
    if (name == "blocks.0.conv1.weight_g") g = &t;
  }
  ASSERT_TRUE(v && g);
  EXPECT_EQ(w.tensors().at("blocks.0.conv1.weight"), FoldWeightNorm(*v, *g));
}

TEST(ModelWeightsTest, FormatErrors) {
  const std::vector<std::uint8_t> good =
      EncodeWeightFile(MakeRandomWeightFile(SmallModel()));

  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(DecodeError(bad_magic), ErrorCode::kBadMagic);

  auto version = good;
  version[4] = 9;
  EXPECT_EQ(DecodeError(version), ErrorCode::kVersionMismatch);

  auto truncated = good;
  truncated.resize(good.size() / 2);
  EXPECT_EQ(DecodeError(truncated), ErrorCode::kTruncatedFile);

  auto flipped = good;
  flipped[good.size() - 6] ^= 0x40;  // inside the last payload
  EXPECT_EQ(DecodeError(flipped), ErrorCode::kCorruptFile);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(DecodeError(trailing), ErrorCode::kCorruptFile);
}

TEST(ModelWeightsTest, MissingFile) {
  TempDir dir;
  try {
    LoadWeights(dir.File("absent.lpmw"));
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

}  // namespace
}  // namespace lpm
