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

#include "lpm/binary_io.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace lpm {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kSilentNoise: return "SilentNoise";
    case ErrorCode::kSilentSpeech: return "SilentSpeech";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoSpeechDetected: return "NoSpeechDetected";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kBandTooNarrow: return "BandTooNarrow";
    case ErrorCode::kInsufficientTemplates: return "InsufficientTemplates";
    case ErrorCode::kEmptyEmbedding: return "EmptyEmbedding";
    case ErrorCode::kEmptyPhraseSet: return "EmptyPhraseSet";
    case ErrorCode::kBackendMismatch: return "BackendMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingAudio: return "MissingAudio";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kNoInDomainPredictions: return "NoInDomainPredictions";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
    std::size_t n = std::min(kChunk, bytes.size() - off);
    crc = crc32(crc, bytes.data() + off, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

Sha256Digest Sha256(std::span<const std::uint8_t> bytes) {
  Sha256Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw LpmError(ErrorCode::kIoError, "SHA-256 computation failed");
  }
  return out;
}

std::string HexString(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xf]);
  }
  return s;
}

std::vector<std::uint8_t> ReadFileBytes(const std::string &path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw LpmError(ErrorCode::kFileNotFound, path);
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) throw LpmError(ErrorCode::kIoError, "cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(is),
                                   std::istreambuf_iterator<char>());
}

void WriteFileBytes(const std::string &path,
                    std::span<const std::uint8_t> bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw LpmError(ErrorCode::kIoError, "cannot write " + path);
  os.write(reinterpret_cast<const char *>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw LpmError(ErrorCode::kIoError, "write failed: " + path);
}

void ByteWriter::U16(std::uint16_t v) {
  U8(static_cast<std::uint8_t>(v));
  U8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::F64(double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(bits >> (8 * i)));
}

void ByteWriter::Bytes(std::span<const std::uint8_t> bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::AppendCrc() { U32(Crc32(buf_)); }

void ByteReader::Need(std::size_t n) const {
  if (remaining() < n) {
    throw LpmError(underflow_code_,
                   "unexpected end of data at byte " + std::to_string(pos_));
  }
}

std::uint8_t ByteReader::U8() {
  Need(1);
  return bytes_[pos_++];
}

std::uint16_t ByteReader::U16() {
  Need(2);
  std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] |
                                               (bytes_[pos_ + 1] << 8));
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  }
  pos_ += 4;
  return v;
}

float ByteReader::F32() { return std::bit_cast<float>(U32()); }

double ByteReader::F64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  }
  pos_ += 8;
  return std::bit_cast<double>(v);
}

std::string ByteReader::Str(std::size_t n) {
  auto b = Bytes(n);
  return std::string(reinterpret_cast<const char *>(b.data()), b.size());
}

std::span<const std::uint8_t> ByteReader::Bytes(std::size_t n) {
  Need(n);
  auto out = bytes_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void VerifyTrailingCrc(std::span<const std::uint8_t> bytes,
                       const ByteReader &reader, ErrorCode truncated_code,
                       const std::string &what) {
  const std::size_t body = reader.position();
  if (bytes.size() < body + 4) {
    throw LpmError(truncated_code, what + ": missing CRC32 trailer");
  }
  if (bytes.size() > body + 4) {
    throw LpmError(ErrorCode::kCorruptFile,
                   what + ": trailing bytes after CRC32");
  }
  ByteReader tail(bytes.subspan(body), truncated_code);
  const std::uint32_t stored = tail.U32();
  if (stored != Crc32(bytes.first(body))) {
    throw LpmError(ErrorCode::kCorruptFile, what + ": CRC32 mismatch");
  }
}

}  // namespace lpm
