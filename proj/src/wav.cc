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

#include "lpm/wav.h"

#include <algorithm>
#include <cmath>

#include "lpm/binary_io.h"
#include "lpm/error.h"

namespace lpm {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

float DecodeSample(const std::uint8_t *p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      ByteReader r({p, 4}, ErrorCode::kUnsupportedFormat);
      return r.F32();
    }
    ByteReader r({p, 8}, ErrorCode::kUnsupportedFormat);
    return static_cast<float>(r.F64());
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0f;
    case 16: {
      auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
      return v / 32768.0f;
    }
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return static_cast<float>(v / 8388608.0);
    }
    default: {
      std::int32_t v = static_cast<std::int32_t>(
          static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
          (static_cast<std::uint32_t>(p[2]) << 16) |
          (static_cast<std::uint32_t>(p[3]) << 24));
      return static_cast<float>(v / 2147483648.0);
    }
  }
}

}  // namespace

WavData DecodeWav(const std::vector<std::uint8_t> &bytes,
                  const std::string &name) {
  const auto bad = [&name](const std::string &why) {
    return LpmError(ErrorCode::kUnsupportedFormat, name + ": " + why);
  };
  ByteReader r(bytes, ErrorCode::kUnsupportedFormat);
  if (bytes.size() < 12 || r.Str(4) != "RIFF") throw bad("not a RIFF file");
  r.U32();
  if (r.Str(4) != "WAVE") throw bad("not a WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> payload;
  bool have_data = false;
  while (r.remaining() >= 8 && !have_data) {
    const std::string id = r.Str(4);
    const std::uint32_t size = r.U32();
    if (id == "fmt ") {
      if (size < 16) throw bad("short fmt chunk");
      ByteReader f(r.Bytes(size), ErrorCode::kUnsupportedFormat);
      format = f.U16();
      channels = f.U16();
      rate = f.U32();
      f.U32();  // byte rate
      block_align = f.U16();
      bits = f.U16();
      if (format == kFormatExtensible) {
        if (size < 40) throw bad("short WAVE_FORMAT_EXTENSIBLE chunk");
        f.U16();  // cbSize
        f.U16();  // valid bits
        f.U32();  // channel mask
        format = f.U16();  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw bad("data chunk before fmt chunk");
      // Some writers leave the size field at 0 or 0xFFFFFFFF when streaming.
      const std::size_t n = std::min<std::size_t>(size, r.remaining());
      payload = r.Bytes(n);
      have_data = true;
    } else {
      r.Bytes(std::min<std::size_t>(size + (size & 1u), r.remaining()));
      continue;
    }
    if ((size & 1u) && r.remaining() > 0) r.U8();
  }
  if (!have_fmt) throw bad("missing fmt chunk");
  if (!have_data) throw bad("missing data chunk");
  if (format != kFormatPcm && format != kFormatFloat) {
    throw bad("unsupported codec id " + std::to_string(format));
  }
  const bool bits_ok =
      format == kFormatPcm
          ? (bits == 8 || bits == 16 || bits == 24 || bits == 32)
          : (bits == 32 || bits == 64);
  if (!bits_ok) throw bad("unsupported bit depth " + std::to_string(bits));
  if (channels == 0 || rate == 0) throw bad("zero channels or sample rate");
  const std::size_t bytes_per_sample = bits / 8;
  if (block_align != bytes_per_sample * channels) {
    throw bad("inconsistent block alignment");
  }

  WavData wav;
  wav.sample_rate_hz = static_cast<int>(rate);
  const std::size_t frames = payload.size() / block_align;
  wav.channels.assign(channels, std::vector<float>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t *p =
          payload.data() + i * block_align + c * bytes_per_sample;
      wav.channels[c][i] = DecodeSample(p, format, bits);
    }
  }
  return wav;
}

WavData ReadWav(const std::string &path) {
  return DecodeWav(ReadFileBytes(path), path);
}

void WriteWav(const std::string &path, const WavData &wav,
              WavEncoding encoding) {
  if (wav.channels.empty() || wav.sample_rate_hz <= 0) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "WriteWav needs at least one channel and a sample rate");
  }
  const std::size_t frames = wav.num_frames();
  for (const auto &ch : wav.channels) {
    if (ch.size() != frames) {
      throw LpmError(ErrorCode::kInvalidArgument, "ragged channel lengths");
    }
  }
  const auto channels = static_cast<std::uint16_t>(wav.channels.size());
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t block_align = channels * (bits / 8);
  const auto data_size = static_cast<std::uint32_t>(frames * block_align);

  ByteWriter w;
  w.Str("RIFF");
  w.U32(36 + data_size);
  w.Str("WAVE");
  w.Str("fmt ");
  w.U32(16);
  w.U16(encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  w.U16(channels);
  w.U32(static_cast<std::uint32_t>(wav.sample_rate_hz));
  w.U32(static_cast<std::uint32_t>(wav.sample_rate_hz) * block_align);
  w.U16(block_align);
  w.U16(bits);
  w.Str("data");
  w.U32(data_size);
  for (std::size_t i = 0; i < frames; ++i) {
    for (const auto &ch : wav.channels) {
      const float s = ch[i];
      if (encoding == WavEncoding::kPcm16) {
        const double scaled = std::round(std::clamp(s, -1.0f, 1.0f) * 32768.0);
        w.U16(static_cast<std::uint16_t>(static_cast<std::int16_t>(
            std::clamp(scaled, -32768.0, 32767.0))));
      } else {
        w.F32(s);
      }
    }
  }
  WriteFileBytes(path, w.bytes());
}

}  // namespace lpm
