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

#include "lpm/phrase_set_io.h"

#include <cmath>

#include "lpm/binary_io.h"
#include "lpm/error.h"

namespace lpm {
namespace {

constexpr char kMagic[] = "LPMS";

}  // namespace

std::vector<std::uint8_t> EncodePhraseSet(const PhraseSet &set) {
  if (std::isnan(set.alpha)) {
    throw LpmError(ErrorCode::kInvalidArgument, "alpha is NaN");
  }
  ByteWriter w;
  w.Str(kMagic);
  w.U32(kPhraseSetFormatVersion);
  w.F64(set.alpha);
  w.U8(static_cast<std::uint8_t>(set.dtw.metric));
  w.U8(set.dtw.normalize_by_path_length ? 1 : 0);
  const std::size_t band = set.dtw.band_radius.value_or(0);
  if (band > 0xFFFFFFFFu) {
    throw LpmError(ErrorCode::kInvalidArgument, "band radius too large");
  }
  w.U32(static_cast<std::uint32_t>(band));
  w.U8(static_cast<std::uint8_t>(set.backend.kind));
  w.Bytes(set.backend.hash);
  w.U32(static_cast<std::uint32_t>(set.templates.size()));
  for (const auto &t : set.templates) {
    if (t.label.size() > 0xFFFF) {
      throw LpmError(ErrorCode::kInvalidArgument, "label too long");
    }
    w.U16(static_cast<std::uint16_t>(t.label.size()));
    w.Str(t.label);
    w.F64(t.threshold);
    w.U32(static_cast<std::uint32_t>(t.embedding.rows()));
    w.U32(static_cast<std::uint32_t>(t.embedding.cols()));
    for (double v : t.embedding.data()) w.F32(static_cast<float>(v));
  }
  w.AppendCrc();
  return w.bytes();
}

PhraseSet DecodePhraseSet(const std::vector<std::uint8_t> &bytes) {
  ByteReader r(bytes, ErrorCode::kCorruptFile);
  if (bytes.size() < 4 || r.Str(4) != kMagic) {
    throw LpmError(ErrorCode::kBadMagic, "not an LPMS phrase-set file");
  }
  const std::uint32_t version = r.U32();
  if (version != kPhraseSetFormatVersion) {
    throw LpmError(ErrorCode::kVersionMismatch,
                   "LPMS version " + std::to_string(version) + ", expected " +
                       std::to_string(kPhraseSetFormatVersion));
  }
  PhraseSet set;
  set.alpha = r.F64();
  const std::uint8_t metric = r.U8();
  const std::uint8_t normalize = r.U8();
  const std::uint32_t band = r.U32();
  const std::uint8_t kind = r.U8();
  if (std::isnan(set.alpha) || !(set.alpha > 0.0) || metric > 1 ||
      normalize > 1 || kind > 1) {
    throw LpmError(ErrorCode::kCorruptFile, "invalid LPMS header fields");
  }
  set.dtw.metric = static_cast<LocalMetric>(metric);
  set.dtw.normalize_by_path_length = normalize == 1;
  if (band != 0) set.dtw.band_radius = band;
  set.backend.kind = static_cast<BackendKind>(kind);
  const auto hash = r.Bytes(set.backend.hash.size());
  std::copy(hash.begin(), hash.end(), set.backend.hash.begin());

  const std::uint32_t count = r.U32();
  for (std::uint32_t n = 0; n < count; ++n) {
    PhraseTemplate t;
    t.label = r.Str(r.U16());
    t.threshold = r.F64();
    const std::size_t rows = r.U32();
    const std::size_t cols = r.U32();
    if (rows * cols > r.remaining() / 4) {
      throw LpmError(ErrorCode::kCorruptFile,
                     "template " + std::to_string(n) + " runs past end");
    }
    std::vector<double> data(rows * cols);
    for (double &v : data) v = r.F32();
    t.embedding = FeatureMatrix(rows, cols, std::move(data));
    set.templates.push_back(std::move(t));
  }
  VerifyTrailingCrc(bytes, r, ErrorCode::kCorruptFile, "LPMS");
  return set;
}

void SavePhraseSet(const PhraseSet &set, const std::string &path) {
  WriteFileBytes(path, EncodePhraseSet(set));
}

PhraseSet LoadPhraseSet(const std::string &path,
                        const BackendId *expected_backend) {
  PhraseSet set = DecodePhraseSet(ReadFileBytes(path));
  if (expected_backend && !(set.backend == *expected_backend)) {
    throw LpmError(ErrorCode::kBackendMismatch,
                   path + " was enrolled with " + set.backend.ToString() +
                       ", current backend is " +
                       expected_backend->ToString());
  }
  return set;
}

}  // namespace lpm
