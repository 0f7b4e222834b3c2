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

#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "lpm/binary_io.h"
#include "lpm/error.h"

namespace lpm {
namespace {

constexpr char kMagic[] = "LPMW";

std::string DimsString(const std::vector<std::uint32_t> &dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

[[noreturn]] void ShapeError(const std::string &name,
                             const std::string &detail) {
  throw LpmError(ErrorCode::kShapeMismatch, "tensor '" + name + "': " + detail);
}

class TensorTable {
 public:
  explicit TensorTable(const WeightFile &file) {
    for (const auto &[name, tensor] : file.tensors) {
      if (!raw_.emplace(name, &tensor).second) {
        ShapeError(name, "duplicate tensor");
      }
      if (tensor.data.size() != tensor.numel()) {
        ShapeError(name, "payload size does not match dims");
      }
    }
  }

  // Returns the folded kernel for `prefix`, from either "prefix.weight" or
  // the "prefix.weight_v"/"prefix.weight_g" pair.
  Tensor Kernel(const std::string &prefix,
                const std::vector<std::uint32_t> &dims) {
    const std::string plain = prefix + ".weight";
    if (const Tensor *t = Find(plain)) {
      Check(plain, *t, dims);
      return *t;
    }
    const std::string v_name = prefix + ".weight_v";
    const std::string g_name = prefix + ".weight_g";
    const Tensor *v = Find(v_name);
    const Tensor *g = Find(g_name);
    if (!v || !g) ShapeError(plain, "missing (no plain or weight-norm form)");
    Check(v_name, *v, dims);
    Check(g_name, *g, {dims[0]});
    return FoldWeightNorm(*v, *g);
  }

  Tensor Plain(const std::string &name,
               const std::vector<std::uint32_t> &dims) {
    const Tensor *t = Find(name);
    if (!t) ShapeError(name, "missing");
    Check(name, *t, dims);
    return *t;
  }

  const Tensor *Find(const std::string &name) {
    auto it = raw_.find(name);
    if (it == raw_.end()) return nullptr;
    used_.insert(name);
    return it->second;
  }

  void CheckAllUsed() const {
    for (const auto &[name, tensor] : raw_) {
      if (!used_.count(name)) ShapeError(name, "not part of the architecture");
    }
  }

 private:
  static void Check(const std::string &name, const Tensor &t,
                    const std::vector<std::uint32_t> &dims) {
    if (t.dims != dims) {
      ShapeError(name, "expected " + DimsString(dims) + ", got " +
                           DimsString(t.dims));
    }
  }

  std::map<std::string, const Tensor *> raw_;
  std::set<std::string> used_;
};

std::vector<double> ToDouble(const std::vector<float> &v) {
  return std::vector<double>(v.begin(), v.end());
}

ModelWeights::Conv MakeConv(const Tensor &kernel, const Tensor &bias,
                            std::uint32_t dilation) {
  ModelWeights::Conv conv;
  conv.out = kernel.dims[0];
  conv.in = kernel.dims[1];
  conv.kernel = kernel.dims[2];
  conv.dilation = dilation;
  conv.taps.resize(kernel.data.size());
  // [out][in][k] -> [k][out][in]
  for (std::uint32_t o = 0; o < conv.out; ++o) {
    for (std::uint32_t i = 0; i < conv.in; ++i) {
      for (std::uint32_t k = 0; k < conv.kernel; ++k) {
        conv.taps[(static_cast<std::size_t>(k) * conv.out + o) * conv.in + i] =
            kernel.data[(static_cast<std::size_t>(o) * conv.in + i) *
                            conv.kernel + k];
      }
    }
  }
  conv.bias = ToDouble(bias.data);
  return conv;
}

ModelWeights::Dense MakeDense(const Tensor &weight, const Tensor &bias) {
  ModelWeights::Dense dense;
  dense.out = weight.dims[0];
  dense.in = weight.dims[1];
  dense.weight = ToDouble(weight.data);
  dense.bias = ToDouble(bias.data);
  return dense;
}

}  // namespace

std::size_t Tensor::numel() const {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

Tensor FoldWeightNorm(const Tensor &direction, const Tensor &magnitude) {
  if (direction.dims.empty() || magnitude.numel() != direction.dims[0]) {
    throw LpmError(ErrorCode::kShapeMismatch,
                   "weight-norm magnitude must have one entry per output "
                   "channel");
  }
  Tensor folded = direction;
  const std::size_t out = direction.dims[0];
  const std::size_t per = direction.numel() / out;
  for (std::size_t o = 0; o < out; ++o) {
    double sq = 0.0;
    for (std::size_t j = 0; j < per; ++j) {
      const double v = direction.data[o * per + j];
      sq += v * v;
    }
    const double norm = std::sqrt(sq);
    const double g = magnitude.data[o];
    for (std::size_t j = 0; j < per; ++j) {
      const double v = direction.data[o * per + j];
      folded.data[o * per + j] =
          norm == 0.0 ? 0.0f : static_cast<float>(g * (v / norm));
    }
  }
  return folded;
}

WeightFile DecodeWeightFile(const std::vector<std::uint8_t> &bytes) {
  ByteReader r(bytes, ErrorCode::kTruncatedFile);
  if (bytes.size() < 4 || r.Str(4) != kMagic) {
    throw LpmError(ErrorCode::kBadMagic, "not an LPMW weight file");
  }
  const std::uint32_t version = r.U32();
  if (version != kWeightFormatVersion) {
    throw LpmError(ErrorCode::kVersionMismatch,
                   "LPMW version " + std::to_string(version) +
                       ", expected " + std::to_string(kWeightFormatVersion));
  }
  WeightFile file;
  file.metadata.input_dim = r.U32();
  file.metadata.embed_dim = r.U32();
  file.metadata.vocab_size = r.U32();
  file.metadata.num_blocks = r.U32();
  file.metadata.tap_id = r.U32();
  const std::uint32_t count = r.U32();
  for (std::uint32_t n = 0; n < count; ++n) {
    std::string name = r.Str(r.U16());
    Tensor t;
    const std::uint8_t ndim = r.U8();
    for (std::uint8_t d = 0; d < ndim; ++d) t.dims.push_back(r.U32());
    const std::size_t numel = t.numel();
    if (numel > r.remaining() / 4) {
      throw LpmError(ErrorCode::kTruncatedFile,
                     "payload of tensor '" + name + "' runs past end of file");
    }
    t.data.resize(numel);
    for (float &v : t.data) v = r.F32();
    file.tensors.emplace_back(std::move(name), std::move(t));
  }
  VerifyTrailingCrc(bytes, r, ErrorCode::kTruncatedFile, "LPMW");
  return file;
}

std::vector<std::uint8_t> EncodeWeightFile(const WeightFile &file) {
  ByteWriter w;
  w.Str(kMagic);
  w.U32(kWeightFormatVersion);
  const ModelMetadata &m = file.metadata;
  for (std::uint32_t v :
       {m.input_dim, m.embed_dim, m.vocab_size, m.num_blocks, m.tap_id}) {
    w.U32(v);
  }
  w.U32(static_cast<std::uint32_t>(file.tensors.size()));
  for (const auto &[name, t] : file.tensors) {
    if (name.size() > 0xFFFF || t.dims.size() > 0xFF ||
        t.data.size() != t.numel()) {
      throw LpmError(ErrorCode::kInvalidArgument,
                     "cannot encode tensor '" + name + "'");
    }
    w.U16(static_cast<std::uint16_t>(name.size()));
    w.Str(name);
    w.U8(static_cast<std::uint8_t>(t.dims.size()));
    for (std::uint32_t d : t.dims) w.U32(d);
    for (float v : t.data) w.F32(v);
  }
  w.AppendCrc();
  return w.bytes();
}

void WriteWeightFile(const WeightFile &file, const std::string &path) {
  WriteFileBytes(path, EncodeWeightFile(file));
}

ModelWeights ModelWeights::FromFile(const WeightFile &file) {
  const ModelMetadata &m = file.metadata;
  if (m.input_dim == 0 || m.embed_dim == 0 || m.num_blocks == 0) {
    throw LpmError(ErrorCode::kShapeMismatch,
                   "metadata: input_dim, embed_dim and num_blocks must be > 0");
  }
  if (m.tap_id > m.num_blocks) {
    throw LpmError(ErrorCode::kShapeMismatch,
                   "metadata: tap_id " + std::to_string(m.tap_id) +
                       " exceeds num_blocks");
  }
  TensorTable table(file);
  ModelWeights w;
  w.metadata_ = m;

  std::uint32_t hidden = 0;
  if (const Tensor *t = table.Find("input_proj.weight")) {
    if (!t->dims.empty()) hidden = t->dims[0];
  } else if (const Tensor *v = table.Find("input_proj.weight_v")) {
    if (!v->dims.empty()) hidden = v->dims[0];
  }
  if (hidden == 0) {
    ShapeError("input_proj.weight", "missing or has zero output channels");
  }
  const std::uint32_t vocab_out = m.vocab_size + 1;

  auto add = [&w](const std::string &name, Tensor t) -> const Tensor & {
    return w.tensors_[name] = std::move(t);
  };

  {
    const Tensor &k = add("input_proj.weight",
                          table.Kernel("input_proj", {hidden, m.input_dim, 1}));
    const Tensor &b =
        add("input_proj.bias", table.Plain("input_proj.bias", {hidden}));
    w.input_proj_ = MakeConv(k, b, 1);
  }
  for (std::uint32_t i = 0; i < m.num_blocks; ++i) {
    const std::string p = "blocks." + std::to_string(i);
    Block block;
    const Tensor &k1 = add(p + ".conv1.weight",
                           table.Kernel(p + ".conv1",
                                        {hidden, hidden, kConvKernelSize}));
    const Tensor &b1 =
        add(p + ".conv1.bias", table.Plain(p + ".conv1.bias", {hidden}));
    block.dilated = MakeConv(k1, b1, i + 1);
    const Tensor &k2 = add(p + ".conv2.weight",
                           table.Kernel(p + ".conv2", {hidden, hidden, 1}));
    const Tensor &b2 =
        add(p + ".conv2.bias", table.Plain(p + ".conv2.bias", {hidden}));
    block.pointwise = MakeConv(k2, b2, 1);
    w.blocks_.push_back(std::move(block));
  }
  {
    const Tensor &ew =
        add("embed.weight", table.Plain("embed.weight", {m.embed_dim, hidden}));
    const Tensor &eb =
        add("embed.bias", table.Plain("embed.bias", {m.embed_dim}));
    w.embed_ = MakeDense(ew, eb);
    const Tensor &hw = add("head.weight",
                           table.Plain("head.weight", {vocab_out, m.embed_dim}));
    const Tensor &hb = add("head.bias", table.Plain("head.bias", {vocab_out}));
    w.head_ = MakeDense(hw, hb);
  }
  table.CheckAllUsed();
  return w;
}

std::uint32_t ModelWeights::output_dim() const {
  return metadata_.tap_id == 0 ? metadata_.embed_dim : hidden_dim();
}

ModelWeights LoadWeights(const std::string &path) {
  return ModelWeights::FromFile(DecodeWeightFile(ReadFileBytes(path)));
}

}  // namespace lpm
