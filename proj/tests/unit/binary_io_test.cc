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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.h"

namespace lpm {
namespace {

std::vector<std::uint8_t> Bytes(std::string_view s) { return {s.begin(), s.end()}; }

TEST(ChecksumTest, KnownVectors) {
  EXPECT_EQ(Crc32(Bytes("123456789")), 0xCBF43926u);
  EXPECT_EQ(HexString(Sha256(Bytes("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ByteIoTest, RoundTripLittleEndian) {
  ByteWriter w;
  w.U8(0xAB);
  w.U16(0x1234);
  w.U32(0xDEADBEEF);
  w.F32(-1.5f);
  w.F64(std::numeric_limits<double>::infinity());
  w.Str("hi");
  w.AppendCrc();
  const auto &b = w.bytes();
  EXPECT_EQ(b[1], 0x34);
  EXPECT_EQ(b[2], 0x12);
  EXPECT_EQ(b[3], 0xEF);

  ByteReader r(b, ErrorCode::kTruncatedFile);
  EXPECT_EQ(r.U8(), 0xAB);
  EXPECT_EQ(r.U16(), 0x1234);
  EXPECT_EQ(r.U32(), 0xDEADBEEFu);
  EXPECT_EQ(r.F32(), -1.5f);
  EXPECT_TRUE(std::isinf(r.F64()));
  EXPECT_EQ(r.Str(2), "hi");
  EXPECT_NO_THROW(VerifyTrailingCrc(b, r, ErrorCode::kTruncatedFile, "test"));
}

TEST(ByteIoTest, UnderflowUsesConfiguredCode) {
  const std::vector<std::uint8_t> b{1, 2};
  ByteReader r(b, ErrorCode::kCorruptFile);
  try {
    r.U32();
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptFile);
  }
}

TEST(ByteIoTest, CrcTrailerChecks) {
  ByteWriter w;
  w.U32(7);
  w.AppendCrc();
  auto bytes = w.bytes();
  bytes[0] ^= 1;
  ByteReader r(bytes, ErrorCode::kTruncatedFile);
  r.U32();
  try {
    VerifyTrailingCrc(bytes, r, ErrorCode::kTruncatedFile, "test");
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptFile);
  }
  const std::vector<std::uint8_t> cut(w.bytes().begin(), w.bytes().begin() + 6);
  ByteReader r2(cut, ErrorCode::kTruncatedFile);
  r2.U32();
  try {
    VerifyTrailingCrc(cut, r2, ErrorCode::kTruncatedFile, "test");
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedFile);
  }
}

TEST(ErrorTest, WhatCarriesCodeName) {
  const LpmError e(ErrorCode::kBandTooNarrow, "radius 1 < 3");
  EXPECT_EQ(std::string(e.what()), "BandTooNarrow: radius 1 < 3");
  EXPECT_EQ(e.message(), "radius 1 < 3");
}

TEST(FileIoTest, RoundTripAndMissing) {
  testing::TempDir dir;
  const auto data = Bytes("payload");
  WriteFileBytes(dir.File("x.bin"), data);
  EXPECT_EQ(ReadFileBytes(dir.File("x.bin")), data);
  try {
    ReadFileBytes(dir.File("y.bin"));
    FAIL();
  } catch (const LpmError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
}

}  // namespace
}  // namespace lpm
