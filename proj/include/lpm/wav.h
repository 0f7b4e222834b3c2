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

#ifndef LPM_WAV_H_
#define LPM_WAV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace lpm {

// Decoded RIFF/WAVE payload, channels de-interleaved, samples in [-1, 1].
struct WavData {
  int sample_rate_hz = 0;
  std::vector<std::vector<float>> channels;

  std::size_t num_frames() const {
    return channels.empty() ? 0 : channels.front().size();
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Accepts PCM 8/16/24/32-bit integer and 32/64-bit IEEE float, including
// WAVE_FORMAT_EXTENSIBLE wrappers. Throws kFileNotFound or
// kUnsupportedFormat.
WavData ReadWav(const std::string &path);
WavData DecodeWav(const std::vector<std::uint8_t> &bytes,
                  const std::string &name);

void WriteWav(const std::string &path, const WavData &wav,
              WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace lpm

#endif  // LPM_WAV_H_
