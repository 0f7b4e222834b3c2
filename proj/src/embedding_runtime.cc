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

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpm/error.h"

namespace lpm {
namespace {

using Activations = std::vector<double>;  // t x channels, row-major

double Dot(const double *a, const double *b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void LeakyRelu(Activations &x) {
  for (double &v : x) {
    if (v < 0.0) v *= kLeakyReluSlope;
  }
}

Activations ConvForward(const ModelWeights::Conv &conv, const Activations &x,
                        std::size_t t) {
  const long pad = static_cast<long>(conv.dilation * (conv.kernel - 1) / 2);
  Activations y(t * conv.out);
  for (std::size_t f = 0; f < t; ++f) {
    double *out = y.data() + f * conv.out;
    std::copy(conv.bias.begin(), conv.bias.end(), out);
    for (std::uint32_t k = 0; k < conv.kernel; ++k) {
      const long src = static_cast<long>(f) +
                       static_cast<long>(k * conv.dilation) - pad;
      if (src < 0 || src >= static_cast<long>(t)) continue;
      const double *in = x.data() + src * conv.in;
      const double *tap = conv.taps.data() +
                          static_cast<std::size_t>(k) * conv.out * conv.in;
      for (std::uint32_t o = 0; o < conv.out; ++o) {
        out[o] += Dot(tap + static_cast<std::size_t>(o) * conv.in, in, conv.in);
      }
    }
  }
  return y;
}

Activations DenseForward(const ModelWeights::Dense &dense,
                         const Activations &x, std::size_t t) {
  Activations y(t * dense.out);
  for (std::size_t f = 0; f < t; ++f) {
    for (std::uint32_t o = 0; o < dense.out; ++o) {
      y[f * dense.out + o] =
          dense.bias[o] + Dot(dense.weight.data() +
                                  static_cast<std::size_t>(o) * dense.in,
                              x.data() + f * dense.in, dense.in);
    }
  }
  return y;
}

// Embedders emit float32-valued features, the precision of stored
// templates.
FeatureMatrix RoundToFloat(FeatureMatrix m) {
  for (double &v : m.data()) v = static_cast<float>(v);
  return m;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<std::uint8_t> SpectralBackendDescriptor() {
  const std::string d =
      "lpm-spectral/v1 bins=" + std::to_string(MelConfig::kNumBins) +
      " win=" + std::to_string(MelConfig::kWindowSamples) +
      " hop=" + std::to_string(MelConfig::kHopSamples) +
      " fft=" + std::to_string(MelConfig::kFftSize) + " lo=60 hi=7800";
  return std::vector<std::uint8_t>(d.begin(), d.end());
}

}  // namespace

EmbeddingSequence Infer(const ModelWeights &weights, const FeatureMatrix &mel) {
  const ModelMetadata &meta = weights.metadata();
  if (mel.cols() != meta.input_dim) {
    throw LpmError(ErrorCode::kDimensionMismatch,
                   "model expects " + std::to_string(meta.input_dim) +
                       " input features, got " + std::to_string(mel.cols()));
  }
  const std::size_t t = mel.rows();
  const auto input = mel.data();
  Activations x = ConvForward(weights.input_proj(),
                              Activations(input.begin(), input.end()), t);
  Activations tapped;
  for (std::size_t b = 0; b < weights.blocks().size(); ++b) {
    const auto &block = weights.blocks()[b];
    Activations h = ConvForward(block.dilated, x, t);
    LeakyRelu(h);
    h = ConvForward(block.pointwise, h, t);
    LeakyRelu(h);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += h[i];
    if (meta.tap_id == b + 1) tapped = x;
  }
  Activations z = DenseForward(weights.embed(), x, t);

  EmbeddingSequence seq;
  seq.sad.resize(t);
  {
    Activations hidden = z;
    LeakyRelu(hidden);
    const auto &head = weights.head();
    const std::uint32_t sad_row = head.out - 1;
    const double *w =
        head.weight.data() + static_cast<std::size_t>(sad_row) * head.in;
    for (std::size_t f = 0; f < t; ++f) {
      seq.sad[f] = Sigmoid(head.bias[sad_row] +
                           Dot(w, hidden.data() + f * head.in, head.in));
    }
  }
  const std::size_t dim = weights.output_dim();
  seq.frames = FeatureMatrix(t, dim, meta.tap_id == 0 ? std::move(z)
                                                      : std::move(tapped));
  return seq;
}

EmbeddingSequence TrimSilence(const EmbeddingSequence &seq,
                              double sad_threshold, TrimMode mode) {
  if (!(sad_threshold > 0.0 && sad_threshold < 1.0)) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "sad_threshold must lie in (0, 1)");
  }
  const auto &sad = seq.sad;
  auto speech = [&](double p) { return p >= sad_threshold; };
  const auto first = std::find_if(sad.begin(), sad.end(), speech);
  if (first == sad.end()) {
    throw LpmError(ErrorCode::kNoSpeechDetected,
                   "no frame reaches SAD threshold " +
                       std::to_string(sad_threshold));
  }
  const auto last = std::find_if(sad.rbegin(), sad.rend(), speech);
  const auto begin = static_cast<std::size_t>(first - sad.begin());
  const auto end = static_cast<std::size_t>(sad.rend() - last);

  EmbeddingSequence out;
  if (mode == TrimMode::kBoundary) {
    out.frames = seq.frames.SliceRows(begin, end);
    out.sad.assign(sad.begin() + begin, sad.begin() + end);
    return out;
  }
  std::vector<double> data;
  const std::size_t cols = seq.frames.cols();
  for (std::size_t i = begin; i < end; ++i) {
    if (!speech(sad[i])) continue;
    const auto row = seq.frames.row(i);
    data.insert(data.end(), row.begin(), row.end());
    out.sad.push_back(sad[i]);
  }
  out.frames = FeatureMatrix(out.sad.size(), cols, std::move(data));
  return out;
}

std::string BackendId::ToString() const {
  return std::string(kind == BackendKind::kKws ? "kws:" : "spectral:") +
         HexString(hash);
}

BackendId SpectralBackendId() {
  return {BackendKind::kSpectral, Sha256(SpectralBackendDescriptor())};
}

std::vector<double> EnergyGateSad(const AudioClip &clip) {
  constexpr double kAbsoluteGateDb = -60.0;
  constexpr double kRelativeGateDb = 40.0;
  const std::size_t t = NumMelFrames(clip.samples.size());
  std::vector<double> level_db(t);
  double peak_db = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t; ++i) {
    const float *frame = clip.samples.data() + i * MelConfig::kHopSamples;
    double acc = 0.0;
    for (int n = 0; n < MelConfig::kWindowSamples; ++n) {
      acc += static_cast<double>(frame[n]) * frame[n];
    }
    const double ms = acc / MelConfig::kWindowSamples;
    level_db[i] = ms > 0.0 ? 10.0 * std::log10(ms)
                           : -std::numeric_limits<double>::infinity();
    peak_db = std::max(peak_db, level_db[i]);
  }
  const double gate = std::max(kAbsoluteGateDb, peak_db - kRelativeGateDb);
  std::vector<double> sad(t);
  for (std::size_t i = 0; i < t; ++i) sad[i] = level_db[i] >= gate ? 1.0 : 0.0;
  return sad;
}

SpectralEmbedder::SpectralEmbedder() : id_(SpectralBackendId()) {}

EmbeddingSequence SpectralEmbedder::Embed(const AudioClip &clip) const {
  EmbeddingSequence seq;
  seq.frames = RoundToFloat(ComputeLogMel(clip).frames);
  seq.sad = EnergyGateSad(clip);
  return seq;
}

std::unique_ptr<KwsEmbedder> KwsEmbedder::FromFile(const std::string &path) {
  const auto bytes = ReadFileBytes(path);
  auto weights = std::make_shared<const ModelWeights>(
      ModelWeights::FromFile(DecodeWeightFile(bytes)));
  return std::make_unique<KwsEmbedder>(std::move(weights), Sha256(bytes));
}

KwsEmbedder::KwsEmbedder(std::shared_ptr<const ModelWeights> weights,
                         Sha256Digest hash)
    : weights_(std::move(weights)), id_{BackendKind::kKws, hash} {}

EmbeddingSequence KwsEmbedder::Embed(const AudioClip &clip) const {
  EmbeddingSequence seq = Infer(*weights_, ComputeLogMel(clip).frames);
  seq.frames = RoundToFloat(std::move(seq.frames));
  return seq;
}

EmbeddingSequence EmbedUtterance(const Embedder &embedder,
                                 const AudioClip &clip,
                                 const EmbedOptions &options) {
  return TrimSilence(embedder.Embed(clip), options.sad_threshold,
                     options.trim_mode);
}

}  // namespace lpm
