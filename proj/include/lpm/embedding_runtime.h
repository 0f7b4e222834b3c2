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

#ifndef LPM_EMBEDDING_RUNTIME_H_
#define LPM_EMBEDDING_RUNTIME_H_

#include <memory>
#include <string>
#include <vector>

#include "lpm/audio_frontend.h"
#include "lpm/binary_io.h"
#include "lpm/feature_matrix.h"
#include "lpm/model_weights.h"

namespace lpm {

inline constexpr double kLeakyReluSlope = 0.01;

// Per-frame phrase representation plus speech-activity posterior.
struct EmbeddingSequence {
  FeatureMatrix frames;     // t x f
  std::vector<double> sad;  // length t, values in [0, 1]

  std::size_t num_frames() const { return frames.rows(); }
};

// Runs the dilated residual TCN:
//   x = input_proj(mel)                                   (k=1 conv, 64 -> H)
//   for block i: x += lrelu(conv2(lrelu(conv1_{k=5,d=i+1}(x))))
//   z = embed(x)                                          (H -> E, tapped)
//   sad = sigmoid(head(lrelu(z)))[last]
// All convolutions use symmetric zero padding, so the output has as many
// frames as the input. Output frame k depends only on input frames within
// 2 * sum(i + 1) = 42 frames of k; the full receptive field spans 85 frames.
// Throws kDimensionMismatch when mel.cols() != input_dim.
EmbeddingSequence Infer(const ModelWeights &weights, const FeatureMatrix &mel);

enum class TrimMode {
  kBoundary,      // drop leading and trailing non-speech only
  kAllNonSpeech,  // also drop interior frames below threshold
};

// Keeps frames from the first to the last frame with sad >= threshold.
// Throws kNoSpeechDetected when no frame reaches the threshold and
// kInvalidArgument for a threshold outside (0, 1).
EmbeddingSequence TrimSilence(const EmbeddingSequence &seq,
                              double sad_threshold = 0.5,
                              TrimMode mode = TrimMode::kBoundary);

enum class BackendKind : std::uint8_t { kSpectral = 0, kKws = 1 };

struct BackendId {
  BackendKind kind = BackendKind::kSpectral;
  Sha256Digest hash{};

  bool operator==(const BackendId &) const = default;
  std::string ToString() const;
};

// Identity of the raw log-mel backend (hash of its frontend parameters).
BackendId SpectralBackendId();

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Untrimmed sequence for a 16 kHz clip.
  virtual EmbeddingSequence Embed(const AudioClip &clip) const = 0;
  virtual const BackendId &backend() const = 0;
  virtual std::size_t feature_dim() const = 0;
};

// Z = log-mel frames; SAD is a hard energy gate on the raw frame samples
// (RMS at least -60 dBFS and within 40 dB of the loudest frame).
class SpectralEmbedder : public Embedder {
 public:
  SpectralEmbedder();
  EmbeddingSequence Embed(const AudioClip &clip) const override;
  const BackendId &backend() const override { return id_; }
  std::size_t feature_dim() const override { return MelConfig::kNumBins; }

 private:
  BackendId id_;
};

// Energy-gate SAD posterior (0 or 1) per mel frame.
std::vector<double> EnergyGateSad(const AudioClip &clip);

class KwsEmbedder : public Embedder {
 public:
  // Backend hash is SHA-256 of the weight file bytes.
  static std::unique_ptr<KwsEmbedder> FromFile(const std::string &path);
  KwsEmbedder(std::shared_ptr<const ModelWeights> weights, Sha256Digest hash);

  EmbeddingSequence Embed(const AudioClip &clip) const override;
  const BackendId &backend() const override { return id_; }
  std::size_t feature_dim() const override { return weights_->output_dim(); }
  const ModelWeights &weights() const { return *weights_; }

 private:
  std::shared_ptr<const ModelWeights> weights_;
  BackendId id_;
};

struct EmbedOptions {
  double sad_threshold = 0.5;
  TrimMode trim_mode = TrimMode::kBoundary;
};

// Embed followed by TrimSilence.
EmbeddingSequence EmbedUtterance(const Embedder &embedder,
                                 const AudioClip &clip,
                                 const EmbedOptions &options = {});

}  // namespace lpm

#endif  // LPM_EMBEDDING_RUNTIME_H_
