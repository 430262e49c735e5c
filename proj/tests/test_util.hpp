// tests/test_util.hpp

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

#ifndef ADVPOST_TESTS_TEST_UTIL_HPP_
#define ADVPOST_TESTS_TEST_UTIL_HPP_

#include <atomic>
#include <fstream>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <torch/torch.h>
#include <unistd.h>

#include "advpost/dsp/waveform.hpp"
#include "advpost/error.hpp"

namespace advpost::testing {

inline Waveform RandomWaveform(std::size_t n, uint64_t seed, double amp = 0.5,
                               int sample_rate = kCanonicalSampleRate) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(static_cast<float>(-amp), static_cast<float>(amp));
  Waveform w{std::vector<float>(n), sample_rate};
  for (float& v : w.samples) v = u(rng);
  return w;
}

inline Waveform Tone(double hz, double seconds, double amp = 0.5,
                     int sample_rate = kCanonicalSampleRate) {
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  Waveform w{std::vector<float>(n), sample_rate};
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(amp * std::sin(2.0 * M_PI * hz * double(i) / sample_rate));
  }
  return w;
}

/// Fresh directory under the system temp dir, unique per call.
inline std::filesystem::path TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("advpost-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}


/// Expects `stmt` to throw advpost::Error carrying `error_code`.
#define EXPECT_ADVPOST_ERROR(stmt, error_code)                  \
  EXPECT_THROW(                                                 \
      {                                                         \
        try {                                                   \
          stmt;                                                 \
        } catch (const ::advpost::Error& advpost_error_) {      \
          EXPECT_EQ(advpost_error_.code(), error_code)          \
              << advpost_error_.what();                         \
          throw;                                                \
        }                                                       \
      },                                                        \
      ::advpost::Error)


/// Minimal RIFF writer for hand-made headers (format tag, channels, bits).
inline void WriteRawWav(const std::filesystem::path& path, uint16_t format, uint16_t channels,
                        uint32_t rate, uint16_t bits, const std::vector<uint8_t>& data) {
  auto u16 = [](std::ofstream& f, uint16_t v) { f.put(char(v & 0xFF)).put(char(v >> 8)); };
  auto u32 = [&](std::ofstream& f, uint32_t v) {
    u16(f, uint16_t(v & 0xFFFF));
    u16(f, uint16_t(v >> 16));
  };
  std::ofstream f(path, std::ios::binary);
  f.write("RIFF", 4);
  u32(f, 36 + uint32_t(data.size()));
  f.write("WAVEfmt ", 8);
  u32(f, 16);
  u16(f, format);
  u16(f, channels);
  u32(f, rate);
  u32(f, rate * channels * bits / 8);
  u16(f, uint16_t(channels * bits / 8));
  u16(f, bits);
  f.write("data", 4);
  u32(f, uint32_t(data.size()));
  f.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

/// Magnitude (dB) of the strongest Hann-windowed FFT bin within +-50 Hz of hz.
inline double ToneLevelDb(const Waveform& w, double hz) {
  const auto n = static_cast<int64_t>(w.size());
  auto x = torch::from_blob(const_cast<float*>(w.samples.data()), {n}, torch::kFloat32)
               .to(torch::kFloat64);
  x = x * torch::hann_window(n, torch::TensorOptions().dtype(torch::kFloat64));
  const auto mag = torch::abs(torch::fft::rfft(x));
  const double bin_hz = double(w.sample_rate) / n;
  const auto lo = static_cast<int64_t>(std::floor((hz - 50) / bin_hz));
  const auto hi = static_cast<int64_t>(std::ceil((hz + 50) / bin_hz));
  const double peak = mag.narrow(0, lo, hi - lo + 1).max().item<double>();
  return 20.0 * std::log10(peak + 1e-300);
}

}  // namespace advpost::testing

#endif  // ADVPOST_TESTS_TEST_UTIL_HPP_
