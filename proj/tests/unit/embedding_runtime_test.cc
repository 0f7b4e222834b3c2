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

#include "lpm/embedding_runtime.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "lpm/error.h"
#include "oracles.h"
#include "test_support.h"

namespace lpm {
namespace {

using testing::MakeRandomWeightFile;
using testing::OracleForward;
using testing::RandomMatrix;
using testing::RandomModelOptions;
using testing::TempDir;

RandomModelOptions SmallModel(std::uint64_t seed, bool weight_norm = false) {
  RandomModelOptions o;
  o.metadata.embed_dim = 16;
  o.metadata.vocab_size = 4;
  o.hidden_dim = 12;
  o.seed = seed;
  o.weight_norm = weight_norm;
  return o;
}

EmbeddingSequence Seq(std::vector<double> sad) {
  EmbeddingSequence s;
  s.frames = FeatureMatrix(sad.size(), 2);
  for (std::size_t r = 0; r < sad.size(); ++r) s.frames(r, 0) = r;
  s.sad = std::move(sad);
  return s;
}

std::vector<double> FirstColumn(const EmbeddingSequence &s) {
  std::vector<double> v;
  for (std::size_t r = 0; r < s.num_frames(); ++r) v.push_back(s.frames(r, 0));
  return v;
}

TEST(InferTest, ZeroWeightsGiveZeroEmbeddingsAndHalfSad) {
  WeightFile file = MakeRandomWeightFile(SmallModel(1));
  for (auto &[name, t] : file.tensors) std::fill(t.data.begin(), t.data.end(), 0.0f);
  const ModelWeights w = ModelWeights::FromFile(file);
  std::mt19937_64 rng(1);
  const EmbeddingSequence out = Infer(w, RandomMatrix(30, 64, rng));
  ASSERT_EQ(out.num_frames(), 30u);
  for (double v : out.frames.data()) EXPECT_EQ(v, 0.0);
  for (double s : out.sad) EXPECT_EQ(s, 0.5);
}

TEST(InferTest, MatchesDirectConvolution) {
  for (bool weight_norm : {false, true}) {
    for (std::uint32_t tap : {0u, 2u, 6u}) {
      RandomModelOptions o = SmallModel(2 + tap, weight_norm);
      o.metadata.tap_id = tap;
      const WeightFile file = MakeRandomWeightFile(o);
      const ModelWeights w = ModelWeights::FromFile(file);
      std::mt19937_64 rng(3);
      const FeatureMatrix mel = RandomMatrix(200, 64, rng, -3.0, 3.0);
      const EmbeddingSequence got = Infer(w, mel);
      const auto want = OracleForward(file, mel);
      ASSERT_EQ(got.num_frames(), want.frames.size());
      ASSERT_EQ(got.frames.cols(), want.frames[0].size());
      for (std::size_t t = 0; t < want.frames.size(); ++t) {
        for (std::size_t c = 0; c < want.frames[t].size(); ++c) {
          ASSERT_NEAR(got.frames(t, c), want.frames[t][c], 1e-5)
              << "frame " << t << " dim " << c;
        }
        ASSERT_NEAR(got.sad[t], want.sad[t], 1e-5);
      }
    }
  }
}

TEST(InferTest, OutputDependsOnlyOnNearbyInputs) {
  const ModelWeights w = ModelWeights::FromFile(MakeRandomWeightFile(SmallModel(4)));
  std::mt19937_64 rng(5);
  const FeatureMatrix mel = RandomMatrix(160, 64, rng);
  const EmbeddingSequence base = Infer(w, mel);
  const std::size_t k = 80;
  for (std::size_t j : {0u, 30u, 37u, 38u, 122u, 123u, 159u}) {
    FeatureMatrix poked = mel;
    for (std::size_t c = 0; c < 64; ++c) poked(j, c) += 5.0;
    const EmbeddingSequence out = Infer(w, poked);
    const bool same = std::equal(out.frames.row(k).begin(),
                                 out.frames.row(k).end(),
                                 base.frames.row(k).begin()) &&
                      out.sad[k] == base.sad[k];
    const std::size_t gap = j > k ? j - k : k - j;
    // Each block reaches 2 * dilation frames per side: 2 * (1 + ... + 6).
    if (gap > 42) {
      EXPECT_TRUE(same) << "input " << j;
    } else {
      EXPECT_FALSE(same) << "input " << j;
    }
  }
}

TEST(InferTest, PreservesLength) {
  const ModelWeights w = ModelWeights::FromFile(MakeRandomWeightFile(SmallModel(6)));
  std::mt19937_64 rng(7);
  for (std::size_t t : {1u, 2u, 5u, 43u, 97u}) {
    const EmbeddingSequence out = Infer(w, RandomMatrix(t, 64, rng));
    EXPECT_EQ(out.num_frames(), t);
    EXPECT_EQ(out.sad.size(), t);
    for (double s : out.sad) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
}

TEST(InferTest, DeterministicAcrossThreads) {
  const ModelWeights w = ModelWeights::FromFile(MakeRandomWeightFile(SmallModel(8)));
  std::mt19937_64 rng(9);
  const FeatureMatrix mel = RandomMatrix(120, 64, rng);
  const EmbeddingSequence first = Infer(w, mel);
  std::vector<EmbeddingSequence> results(4);
  {
    std::vector<std::jthread> threads;
    for (auto &r : results) {
      threads.emplace_back([&w, &mel, &r] { r = Infer(w, mel); });
    }
  }
  for (const auto &r : results) {
    EXPECT_EQ(r.frames, first.frames);
    EXPECT_EQ(r.sad, first.sad);
  }
}

TEST(InferTest, RejectsWrongInputWidth) {
  const ModelWeights w = ModelWeights::FromFile(MakeRandomWeightFile(SmallModel(10)));
  try {
    Infer(w, FeatureMatrix(10, 40));
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(TrimSilenceTest, Examples) {
  EXPECT_EQ(FirstColumn(TrimSilence(Seq({0.1, 0.9, 0.9, 0.1}))),
            (std::vector<double>{1, 2}));
  EXPECT_EQ(FirstColumn(TrimSilence(Seq({0.6, 0.9, 0.5}))),
            (std::vector<double>{0, 1, 2}));
  EXPECT_EQ(FirstColumn(TrimSilence(Seq({0.1, 0.9, 0.2, 0.9, 0.1}))),
            (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(FirstColumn(TrimSilence(Seq({0.1, 0.9, 0.2, 0.9, 0.1}), 0.5,
                                    TrimMode::kAllNonSpeech)),
            (std::vector<double>{1, 3}));
}

TEST(TrimSilenceTest, Idempotent) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> sad(20);
    for (double &s : sad) s = u(rng);
    sad[7] = 0.95;
    for (auto mode : {TrimMode::kBoundary, TrimMode::kAllNonSpeech}) {
      const EmbeddingSequence once = TrimSilence(Seq(sad), 0.5, mode);
      const EmbeddingSequence twice = TrimSilence(once, 0.5, mode);
      EXPECT_EQ(twice.frames, once.frames);
      EXPECT_EQ(twice.sad, once.sad);
    }
  }
}

TEST(TrimSilenceTest, Errors) {
  try {
    TrimSilence(Seq({0.1, 0.2}));
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSpeechDetected);
  }
  for (double bad : {0.0, 1.0, -0.5}) {
    try {
      TrimSilence(Seq({0.9}), bad);
      FAIL();
    } catch (const LpmError &e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  }
}

TEST(SpectralEmbedderTest, EmitsMelFramesAndEnergyGate) {
  AudioClip clip = testing::Sine(700.0, 0.5, 0.5);
  clip.samples.insert(clip.samples.begin(), 8000, 0.0f);
  const SpectralEmbedder embedder;
  const EmbeddingSequence seq = embedder.Embed(clip);
  const MelSpectrogram mel = ComputeLogMel(clip);
  ASSERT_EQ(seq.num_frames(), mel.num_frames());
  EXPECT_EQ(seq.frames.cols(), 64u);
  for (std::size_t i = 0; i < mel.frames.data().size(); ++i) {
    EXPECT_EQ(seq.frames.data()[i], static_cast<float>(mel.frames.data()[i]));
  }
  EXPECT_EQ(seq.sad.front(), 0.0);
  EXPECT_EQ(seq.sad.back(), 1.0);
  const EmbeddingSequence trimmed = EmbedUtterance(embedder, clip);
  EXPECT_LT(trimmed.num_frames(), seq.num_frames());
  EXPECT_GT(trimmed.num_frames(), 40u);
}

TEST(SpectralEmbedderTest, SilenceHasNoSpeech) {
  AudioClip silence;
  silence.samples.assign(16000, 0.0f);
  try {
    EmbedUtterance(SpectralEmbedder(), silence);
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSpeechDetected);
  }
}

TEST(KwsEmbedderTest, HashIdentifiesWeightFile) {
  TempDir dir;
  WriteWeightFile(MakeRandomWeightFile(SmallModel(12)), dir.File("a.lpmw"));
  WriteWeightFile(MakeRandomWeightFile(SmallModel(13)), dir.File("b.lpmw"));
  const auto a = KwsEmbedder::FromFile(dir.File("a.lpmw"));
  const auto a2 = KwsEmbedder::FromFile(dir.File("a.lpmw"));
  const auto b = KwsEmbedder::FromFile(dir.File("b.lpmw"));
  EXPECT_EQ(a->backend(), a2->backend());
  EXPECT_NE(a->backend(), b->backend());
  EXPECT_EQ(a->backend().kind, BackendKind::kKws);
  EXPECT_NE(a->backend(), SpectralBackendId());
  EXPECT_EQ(a->backend().hash, Sha256(ReadFileBytes(dir.File("a.lpmw"))));
  EXPECT_EQ(a->feature_dim(), 16u);

  const AudioClip clip = testing::Sine(440.0, 0.3, 0.3);
  const EmbeddingSequence seq = a->Embed(clip);
  EXPECT_EQ(seq.num_frames(), NumMelFrames(clip.samples.size()));
  const EmbeddingSequence raw = Infer(a->weights(), ComputeLogMel(clip).frames);
  for (std::size_t i = 0; i < raw.frames.data().size(); ++i) {
    EXPECT_EQ(seq.frames.data()[i], static_cast<float>(raw.frames.data()[i]));
  }
}

}  // namespace
}  // namespace lpm
