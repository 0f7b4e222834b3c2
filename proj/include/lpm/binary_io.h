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

// Little-endian byte encoding shared by the LPMW and LPMS file formats.

#ifndef LPM_BINARY_IO_H_
#define LPM_BINARY_IO_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpm/error.h"

namespace lpm {

using Sha256Digest = std::array<std::uint8_t, 32>;

std::uint32_t Crc32(std::span<const std::uint8_t> bytes);
Sha256Digest Sha256(std::span<const std::uint8_t> bytes);
std::string HexString(std::span<const std::uint8_t> bytes);

// Throws kFileNotFound / kIoError.
std::vector<std::uint8_t> ReadFileBytes(const std::string &path);
void WriteFileBytes(const std::string &path,
                    std::span<const std::uint8_t> bytes);

class ByteWriter {
 public:
  void U8(std::uint8_t v) { buf_.push_back(v); }
  void U16(std::uint16_t v);
  void U32(std::uint32_t v);
  void F32(float v);
  void F64(double v);
  void Bytes(std::span<const std::uint8_t> bytes);
  void Str(std::string_view s) {
    Bytes({reinterpret_cast<const std::uint8_t *>(s.data()), s.size()});
  }
  // Appends CRC32 of everything written so far.
  void AppendCrc();

  const std::vector<std::uint8_t> &bytes() const { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

// Sequential reader. Running past the end throws LpmError(underflow_code).
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, ErrorCode underflow_code)
      : bytes_(bytes), underflow_code_(underflow_code) {}

  std::uint8_t U8();
  std::uint16_t U16();
  std::uint32_t U32();
  float F32();
  double F64();
  std::string Str(std::size_t n);
  std::span<const std::uint8_t> Bytes(std::size_t n);

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void Need(std::size_t n) const;

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  ErrorCode underflow_code_;
};

// Checks the trailing CRC32 once the payload has been consumed: exactly four
// bytes must remain and they must match the CRC of everything before them.
void VerifyTrailingCrc(std::span<const std::uint8_t> bytes,
                       const ByteReader &reader, ErrorCode truncated_code,
                       const std::string &what);

}  // namespace lpm

#endif  // LPM_BINARY_IO_H_
