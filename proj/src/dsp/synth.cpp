// src/dsp/synth.cpp

// Copyright 2026  The advpost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "advpost/dsp/synth.hpp"

#include <cmath>
#include <numbers>

#include "advpost/error.hpp"

namespace advpost::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void NormalizeRms(std::vector<float>& x, double rms) {
  double p = 0.0;
  for (float v : x) p += double(v) * v;
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p / static_cast<double>(x.size()));
  for (float& v : x) v = static_cast<float>(v * g);
}

}  // namespace

std::vector<float> SyllableEnvelope(std::size_t n, int sample_rate,
                                    std::mt19937_64& rng, std::size_t lead_in,
                                    double gap_min_s, double gap_max_s) {
  std::vector<float> env(n, 0.0f);
  auto t = lead_in + static_cast<std::size_t>(Uniform(rng, 0.0, 0.1) * sample_rate);
  while (t < n) {
    const auto len = static_cast<std::size_t>(Uniform(rng, 0.15, 0.35) * sample_rate);
    const std::size_t end = std::min(n, t + len);
    for (std::size_t i = t; i < end; ++i) {
      env[i] = static_cast<float>(
          std::sqrt(std::sin(std::numbers::pi * double(i - t) / double(len))));
    }
    t = end + static_cast<std::size_t>(Uniform(rng, gap_min_s, gap_max_s) * sample_rate);
  }
  return env;
}

std::vector<float> HarmonicSource(std::size_t n, int sample_rate,
                                  std::mt19937_64& rng, double max_hz,
                                  double f0_min, double f0_max) {
  const double f0 = Uniform(rng, f0_min, f0_max);
  const double vib_hz = Uniform(rng, 3.0, 5.0);
  const int harmonics = std::max(1, static_cast<int>(std::ceil(max_hz / f0)) - 1);
  std::vector<double> phase_offset(harmonics);
  for (auto& p : phase_offset) p = Uniform(rng, 0.0, kTwoPi);

  std::vector<float> out(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / sample_rate;
    phase += kTwoPi * f0 * (1.0 + 0.03 * std::sin(kTwoPi * vib_hz * t)) / sample_rate;
    double s = 0.0;
    for (int k = 1; k <= harmonics; ++k) {
      s += std::sin(k * phase + phase_offset[k - 1]) / k;
    }
    out[i] = static_cast<float>(s);
  }
  NormalizeRms(out, 1.0);
  return out;
}

std::vector<float> BandNoise(std::size_t n, int sample_rate,
                             std::mt19937_64& rng, double lo_hz, double hi_hz) {
  std::normal_distribution<double> gauss;
  auto x = torch::empty({static_cast<int64_t>(n)}, torch::kFloat64);
  auto acc = x.accessor<double, 1>();
  for (std::size_t i = 0; i < n; ++i) acc[i] = gauss(rng);
  auto spec = torch::fft::rfft(x);
  const auto freqs = torch::fft::rfftfreq(static_cast<int64_t>(n), 1.0 / sample_rate,
                                          torch::kFloat64);
  spec = spec * ((freqs >= lo_hz) & (freqs < hi_hz));
  x = torch::fft::irfft(spec, static_cast<int64_t>(n)).contiguous();
  std::vector<float> out(x.data_ptr<double>(), x.data_ptr<double>() + n);
  NormalizeRms(out, 1.0);
  return out;
}

Waveform WhiteNoise(std::size_t n, int sample_rate, std::mt19937_64& rng, double rms) {
  std::normal_distribution<float> gauss(0.0f, static_cast<float>(rms));
  Waveform w{std::vector<float>(n), sample_rate};
  for (float& v : w.samples) v = gauss(rng);
  return w;
}

Waveform ToneComplex(std::size_t n, int sample_rate, std::mt19937_64& rng, double rms) {
  Waveform w{std::vector<float>(n, 0.0f), sample_rate};
  std::size_t t = 0;
  while (t < n) {
    const auto len = static_cast<std::size_t>(Uniform(rng, 0.2, 0.6) * sample_rate);
    const std::size_t end = std::min(n, t + len);
    const double root = 110.0 * std::pow(2.0, std::floor(Uniform(rng, 0.0, 24.0)) / 12.0);
    const double ratios[3] = {1.0, std::pow(2.0, 4.0 / 12.0), std::pow(2.0, 7.0 / 12.0)};
    for (std::size_t i = t; i < end; ++i) {
      const double local = double(i - t) / sample_rate;
      const double decay = std::exp(-3.0 * local);
      double s = 0.0;
      for (double r : ratios) {
        s += std::sin(kTwoPi * root * r * local) + 0.3 * std::sin(kTwoPi * 2 * root * r * local);
      }
      w.samples[i] = static_cast<float>(s * decay);
    }
    t = end;
  }
  NormalizeRms(w.samples, rms);
  return w;
}

Waveform Babble(std::size_t n, int sample_rate, std::mt19937_64& rng, int talkers,
                double rms) {
  if (talkers < 1) Fail(ErrorCode::kInvalidArgument, "babble needs at least one talker");
  Waveform w{std::vector<float>(n, 0.0f), sample_rate};
  for (int k = 0; k < talkers; ++k) {
    const auto env = SyllableEnvelope(n, sample_rate, rng, 0);
    const auto src = HarmonicSource(n, sample_rate, rng, 3900.0);
    for (std::size_t i = 0; i < n; ++i) w.samples[i] += env[i] * src[i];
  }
  NormalizeRms(w.samples, rms);
  return w;
}

Waveform ExponentialRir(int sample_rate, std::mt19937_64& rng, double rt60_s,
                        double length_s) {
  if (!(rt60_s > 0) || !(length_s > 0)) {
    Fail(ErrorCode::kInvalidArgument, "RIR rt60 and length must be > 0");
  }
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(length_s * sample_rate));
  std::normal_distribution<double> gauss;
  Waveform w{std::vector<float>(n), sample_rate};
  w.samples[0] = 1.0f;
  const double rate = std::log(1000.0) / rt60_s;  // 60 dB amplitude decay
  for (std::size_t i = 1; i < n; ++i) {
    w.samples[i] = static_cast<float>(0.3 * gauss(rng) * std::exp(-rate * double(i) / sample_rate));
  }
  return w;
}

}  // namespace advpost::synth
