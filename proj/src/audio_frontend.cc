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

#include "lpm/audio_frontend.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "lpm/error.h"
#include "lpm/wav.h"

namespace lpm {
namespace {

constexpr int kNumFftBins = MelConfig::kFftSize / 2 + 1;

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Filter m spans edges[m]..edges[m + 2] with its peak at edges[m + 1].
std::vector<double> MelEdgeFrequencies() {
  const double lo = HzToMel(MelConfig::kLowHz);
  const double hi = HzToMel(MelConfig::kHighHz);
  std::vector<double> edges(MelConfig::kNumBins + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(lo + (hi - lo) * static_cast<double>(i) /
                                (MelConfig::kNumBins + 1));
  }
  return edges;
}

struct MelFilter {
  int first_bin = 0;
  std::vector<double> weights;
};

class MelFrontend {
 public:
  MelFrontend() {
    window_.resize(MelConfig::kWindowSamples);
    for (int n = 0; n < MelConfig::kWindowSamples; ++n) {
      window_[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n /
                                        MelConfig::kWindowSamples);
    }
    const auto edges = MelEdgeFrequencies();
    const double bin_hz =
        static_cast<double>(kCanonicalSampleRate) / MelConfig::kFftSize;
    filters_.resize(MelConfig::kNumBins);
    for (int m = 0; m < MelConfig::kNumBins; ++m) {
      const double left = edges[m], center = edges[m + 1],
                   right = edges[m + 2];
      MelFilter &f = filters_[m];
      f.first_bin = -1;
      for (int k = 0; k < kNumFftBins; ++k) {
        const double hz = k * bin_hz;
        double w = 0.0;
        if (hz > left && hz <= center) {
          w = (hz - left) / (center - left);
        } else if (hz > center && hz < right) {
          w = (right - hz) / (right - center);
        }
        if (w <= 0.0) continue;
        if (f.first_bin < 0) f.first_bin = k;
        f.weights.resize(k - f.first_bin + 1, 0.0);
        f.weights[k - f.first_bin] = w;
      }
      if (f.first_bin < 0) f.first_bin = 0;
    }

    // Planning is not thread-safe in FFTW; execution on fresh arrays is.
    auto *in = fftw_alloc_real(MelConfig::kFftSize);
    auto *out = fftw_alloc_complex(kNumFftBins);
    plan_ = fftw_plan_dft_r2c_1d(MelConfig::kFftSize, in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
  }

  ~MelFrontend() { fftw_destroy_plan(plan_); }

  MelSpectrogram Compute(std::span<const float> samples) const {
    const std::size_t t = NumMelFrames(samples.size());
    std::unique_ptr<double, decltype(&fftw_free)> in(
        fftw_alloc_real(MelConfig::kFftSize), &fftw_free);
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> out(
        fftw_alloc_complex(kNumFftBins), &fftw_free);
    std::vector<double> power(kNumFftBins);

    MelSpectrogram mel{FeatureMatrix(t, MelConfig::kNumBins)};
    for (std::size_t i = 0; i < t; ++i) {
      const float *frame = samples.data() + i * MelConfig::kHopSamples;
      double *buf = in.get();
      for (int n = 0; n < MelConfig::kWindowSamples; ++n) {
        buf[n] = frame[n] * window_[n];
      }
      std::fill(buf + MelConfig::kWindowSamples, buf + MelConfig::kFftSize,
                0.0);
      fftw_execute_dft_r2c(plan_, buf, out.get());
      for (int k = 0; k < kNumFftBins; ++k) {
        const double re = out.get()[k][0], im = out.get()[k][1];
        power[k] = re * re + im * im;
      }
      auto row = mel.frames.row(i);
      for (int m = 0; m < MelConfig::kNumBins; ++m) {
        const MelFilter &f = filters_[m];
        double e = 0.0;
        for (std::size_t j = 0; j < f.weights.size(); ++j) {
          e += f.weights[j] * power[f.first_bin + j];
        }
        row[m] = std::log(e + MelConfig::kLogFloor);
      }
    }
    return mel;
  }

 private:
  std::vector<double> window_;
  std::vector<MelFilter> filters_;
  fftw_plan plan_ = nullptr;
};

const MelFrontend &Frontend() {
  static const MelFrontend frontend;
  return frontend;
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<float> Resample(std::span<const float> input, int in_rate_hz,
                            int out_rate_hz) {
  if (in_rate_hz <= 0 || out_rate_hz <= 0) {
    throw LpmError(ErrorCode::kInvalidArgument, "sample rates must be > 0");
  }
  if (in_rate_hz == out_rate_hz) {
    return std::vector<float>(input.begin(), input.end());
  }
  const auto n = static_cast<long long>(input.size());
  const long long out_len =
      (n * out_rate_hz + in_rate_hz / 2) / in_rate_hz;
  // Cutoff relative to the input Nyquist; below 1 when downsampling.
  const double cutoff =
      std::min(1.0, static_cast<double>(out_rate_hz) / in_rate_hz);
  constexpr double kZeroCrossings = 16.0;
  const double half_width = kZeroCrossings / cutoff;
  const double step = static_cast<double>(in_rate_hz) / out_rate_hz;

  std::vector<float> out(static_cast<std::size_t>(out_len));
  for (long long m = 0; m < out_len; ++m) {
    const double center = m * step;
    const auto lo =
        std::max<long long>(0, static_cast<long long>(std::ceil(center - half_width)));
    const auto hi = std::min<long long>(
        n - 1, static_cast<long long>(std::floor(center + half_width)));
    double acc = 0.0;
    for (long long k = lo; k <= hi; ++k) {
      const double x = k - center;
      const double w =
          0.5 + 0.5 * std::cos(std::numbers::pi * x / half_width);
      acc += input[k] * cutoff * Sinc(cutoff * x) * w;
    }
    out[m] = static_cast<float>(acc);
  }
  return out;
}

AudioClip LoadAudio(const std::string &path) {
  const WavData wav = ReadWav(path);
  const std::size_t frames = wav.num_frames();
  if (frames == 0) throw LpmError(ErrorCode::kEmptyAudio, path);
  std::vector<float> mono(frames, 0.0f);
  const double inv = 1.0 / static_cast<double>(wav.channels.size());
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (const auto &ch : wav.channels) acc += ch[i];
    mono[i] = static_cast<float>(acc * inv);
  }
  AudioClip clip;
  clip.sample_rate_hz = kCanonicalSampleRate;
  clip.samples = Resample(mono, wav.sample_rate_hz, kCanonicalSampleRate);
  for (float &s : clip.samples) s = std::clamp(s, -1.0f, 1.0f);
  if (clip.samples.empty()) throw LpmError(ErrorCode::kEmptyAudio, path);
  return clip;
}

std::size_t NumMelFrames(std::size_t num_samples) {
  if (num_samples < static_cast<std::size_t>(MelConfig::kWindowSamples)) {
    return 0;
  }
  return (num_samples - MelConfig::kWindowSamples) / MelConfig::kHopSamples +
         1;
}

std::vector<double> MelCenterFrequencies() {
  const auto edges = MelEdgeFrequencies();
  return std::vector<double>(edges.begin() + 1, edges.end() - 1);
}

MelSpectrogram ComputeLogMel(const AudioClip &clip) {
  if (clip.sample_rate_hz != kCanonicalSampleRate) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "log-mel frontend expects 16 kHz audio, got " +
                       std::to_string(clip.sample_rate_hz) + " Hz");
  }
  if (NumMelFrames(clip.samples.size()) == 0) {
    throw LpmError(ErrorCode::kTooShort,
                   std::to_string(clip.samples.size()) +
                       " samples is shorter than one 25 ms window");
  }
  return Frontend().Compute(clip.samples);
}

std::vector<bool> ActiveRegionMask(std::span<const float> samples) {
  constexpr std::size_t kBlock = MelConfig::kHopSamples;
  constexpr double kGatePower = 1e-6;  // (10^(-60/20))^2
  std::vector<bool> mask(samples.size(), false);
  for (std::size_t begin = 0; begin < samples.size(); begin += kBlock) {
    const std::size_t end = std::min(samples.size(), begin + kBlock);
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      acc += static_cast<double>(samples[i]) * samples[i];
    }
    if (acc / static_cast<double>(end - begin) >= kGatePower) {
      std::fill(mask.begin() + begin, mask.begin() + end, true);
    }
  }
  return mask;
}

double MaskedPower(std::span<const float> samples,
                   const std::vector<bool> &mask) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!mask[i]) continue;
    acc += static_cast<double>(samples[i]) * samples[i];
    ++count;
  }
  return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

MixResult MixNoiseAtSnr(const AudioClip &speech, const AudioClip &noise,
                        double snr_db, std::size_t noise_offset) {
  if (speech.sample_rate_hz != noise.sample_rate_hz) {
    throw LpmError(ErrorCode::kInvalidArgument,
                   "speech and noise sample rates differ");
  }
  if (std::isnan(snr_db)) {
    throw LpmError(ErrorCode::kInvalidArgument, "snr_db is NaN");
  }
  MixResult result;
  result.clip = speech;
  if (snr_db == kNoNoise) return result;

  double noise_energy = 0.0;
  for (float s : noise.samples) noise_energy += static_cast<double>(s) * s;
  if (noise.samples.empty() || noise_energy == 0.0) {
    throw LpmError(ErrorCode::kSilentNoise, "noise clip has zero RMS");
  }
  const std::vector<bool> mask = ActiveRegionMask(speech.samples);
  const double speech_power = MaskedPower(speech.samples, mask);
  if (speech_power == 0.0) {
    throw LpmError(ErrorCode::kSilentSpeech,
                   "speech has no frame above -60 dBFS");
  }

  const std::size_t n = speech.samples.size();
  std::vector<float> aligned(n);
  for (std::size_t i = 0; i < n; ++i) {
    aligned[i] = noise.samples[(noise_offset + i) % noise.samples.size()];
  }
  const double noise_power = MaskedPower(aligned, mask);
  if (noise_power == 0.0) {
    throw LpmError(ErrorCode::kSilentNoise,
                   "noise is silent over the speech active region");
  }
  const double gain =
      std::sqrt(speech_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  result.noise_gain = gain;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = speech.samples[i] + gain * aligned[i];
    if (v > 1.0 || v < -1.0) ++result.clipped_samples;
    result.clip.samples[i] = static_cast<float>(std::clamp(v, -1.0, 1.0));
  }
  return result;
}

}  // namespace lpm
