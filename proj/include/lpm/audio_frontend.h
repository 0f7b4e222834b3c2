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

#ifndef LPM_AUDIO_FRONTEND_H_
#define LPM_AUDIO_FRONTEND_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpm/feature_matrix.h"

namespace lpm {

inline constexpr int kCanonicalSampleRate = 16000;

// Analysis parameters of the log-mel frontend. Frame rate is 100 Hz.
struct MelConfig {
  static constexpr int kWindowSamples = 400;  // 25 ms
  static constexpr int kHopSamples = 160;     // 10 ms
  static constexpr int kFftSize = 512;
  static constexpr int kNumBins = 64;
  static constexpr double kLowHz = 60.0;
  static constexpr double kHighHz = 7800.0;
  static constexpr double kLogFloor = 1e-6;
  static constexpr int kFrameRateHz = 100;
};

struct AudioClip {
  std::vector<float> samples;
  int sample_rate_hz = kCanonicalSampleRate;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// t x 64 log mel energies.
struct MelSpectrogram {
  FeatureMatrix frames;

  std::size_t num_frames() const { return frames.rows(); }
};

// Reads a WAV file, averages channels to mono and resamples to 16 kHz.
// Throws kFileNotFound, kUnsupportedFormat or kEmptyAudio.
AudioClip LoadAudio(const std::string &path);

// Band-limited (Hann-windowed sinc) resampling. Output length is
// round(n * out_rate / in_rate).
std::vector<float> Resample(std::span<const float> input, int in_rate_hz,
                            int out_rate_hz);

// floor((n - 400) / 160) + 1 for n >= 400, else 0.
std::size_t NumMelFrames(std::size_t num_samples);

// Center frequency (Hz) of each of the 64 triangular filters.
std::vector<double> MelCenterFrequencies();

// Hann-windowed 512-point power spectrum through 64 HTK-mel triangular
// filters, then log(energy + 1e-6). Throws kTooShort when the clip is
// shorter than one window and kInvalidArgument for non-16 kHz input.
MelSpectrogram ComputeLogMel(const AudioClip &clip);

// Per-sample mask of the "active" region: 10 ms blocks whose RMS reaches
// -60 dBFS. The trailing partial block is judged on its own samples.
std::vector<bool> ActiveRegionMask(std::span<const float> samples);

// Mean squared amplitude over the samples selected by `mask`.
double MaskedPower(std::span<const float> samples,
                   const std::vector<bool> &mask);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct MixResult {
  AudioClip clip;
  double noise_gain = 0.0;
  std::size_t clipped_samples = 0;
};

// Adds `noise` (looped from `noise_offset` and truncated to the speech
// length) scaled so that the speech-to-noise power ratio over the speech
// active region equals snr_db. snr_db == kNoNoise returns speech unchanged.
// Throws kSilentNoise, kSilentSpeech, kInvalidArgument.
MixResult MixNoiseAtSnr(const AudioClip &speech, const AudioClip &noise,
                        double snr_db, std::size_t noise_offset = 0);

}  // namespace lpm

#endif  // LPM_AUDIO_FRONTEND_H_
