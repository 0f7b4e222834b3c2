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

// LPMW keyword-model weight files.
//
// Layout (little-endian):
//   "LPMW" | version u32 | input_dim, embed_dim, vocab_size, num_blocks,
//   tap_id (u32 each) | tensor count u32 |
//   per tensor: name length u16, UTF-8 name, ndim u8, dims u32..., f32 data |
//   CRC32 of all preceding bytes.
//
// Tensor manifest for hidden width H (taken from input_proj), E = embed_dim,
// V = vocab_size + 1 (last output is speech activity):
//   input_proj.{weight [H, input_dim, 1], bias [H]}
//   blocks.{i}.conv1.{weight [H, H, 5], bias [H]}     dilation i + 1
//   blocks.{i}.conv2.{weight [H, H, 1], bias [H]}
//   embed.{weight [E, H], bias [E]}
//   head.{weight [V, E], bias [V]}
// Any convolution "X.weight" may instead be stored as a weight-norm pair
// "X.weight_v" (direction, same shape) and "X.weight_g" [out] (magnitude).

#ifndef LPM_MODEL_WEIGHTS_H_
#define LPM_MODEL_WEIGHTS_H_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lpm {

inline constexpr std::uint32_t kWeightFormatVersion = 1;
inline constexpr std::uint32_t kConvKernelSize = 5;

struct ModelMetadata {
  std::uint32_t input_dim = 64;
  std::uint32_t embed_dim = 128;
  std::uint32_t vocab_size = 300;
  std::uint32_t num_blocks = 6;
  // 0: embedding projection output. k in [1, num_blocks]: output of residual
  // block k - 1 (width H).
  std::uint32_t tap_id = 0;

  bool operator==(const ModelMetadata &) const = default;
};

struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t numel() const;
  bool operator==(const Tensor &) const = default;
};

// Raw file contents, tensors in file order.
struct WeightFile {
  ModelMetadata metadata;
  std::vector<std::pair<std::string, Tensor>> tensors;
};

WeightFile DecodeWeightFile(const std::vector<std::uint8_t> &bytes);
std::vector<std::uint8_t> EncodeWeightFile(const WeightFile &file);
void WriteWeightFile(const WeightFile &file, const std::string &path);

// Validated, weight-norm-folded model, laid out for inference.
class ModelWeights {
 public:
  struct Conv {
    std::uint32_t out = 0, in = 0, kernel = 0, dilation = 1;
    std::vector<double> taps;  // [kernel][out][in]
    std::vector<double> bias;
  };
  struct Dense {
    std::uint32_t out = 0, in = 0;
    std::vector<double> weight;  // [out][in]
    std::vector<double> bias;
  };
  struct Block {
    Conv dilated;
    Conv pointwise;
  };

  // Throws kShapeMismatch naming the offending tensor.
  static ModelWeights FromFile(const WeightFile &file);

  const ModelMetadata &metadata() const { return metadata_; }
  std::uint32_t hidden_dim() const { return input_proj_.out; }
  // Feature dimension of the tapped embedding.
  std::uint32_t output_dim() const;

  const Conv &input_proj() const { return input_proj_; }
  const std::vector<Block> &blocks() const { return blocks_; }
  const Dense &embed() const { return embed_; }
  const Dense &head() const { return head_; }

  // Folded float32 tensors keyed by canonical name ("X.weight", "X.bias").
  const std::map<std::string, Tensor> &tensors() const { return tensors_; }

 private:
  ModelMetadata metadata_;
  std::map<std::string, Tensor> tensors_;
  Conv input_proj_;
  std::vector<Block> blocks_;
  Dense embed_, head_;
};

// Reads, CRC-checks, validates and folds. Throws kFileNotFound, kBadMagic,
// kVersionMismatch, kTruncatedFile, kCorruptFile, kShapeMismatch.
ModelWeights LoadWeights(const std::string &path);

// kernel = g * v / |v|, norm taken per output channel over [in, kernel].
Tensor FoldWeightNorm(const Tensor &direction, const Tensor &magnitude);

}  // namespace lpm

#endif  // LPM_MODEL_WEIGHTS_H_
