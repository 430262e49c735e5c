// src/dsp/resample.cpp

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

#include "advpost/dsp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "advpost/error.hpp"

namespace advpost {
namespace {

// Kernel half-width in units of the lower of the two sample periods.
constexpr int kZeroCrossings = 32;
constexpr double kRolloff = 0.9;
constexpr double kBeta = 8.6;

double Kaiser(double x, double beta) {
  // x in [-1, 1]
  if (std::fabs(x) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, beta);
}

double Sinc(double x) {
  if (std::fabs(x) < 1e-12) return 1.0;
  double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

std::vector<double> DesignLowPass(double cutoff, int half_width,
                                  double kaiser_beta) {
  if (!(cutoff > 0.0 && cutoff < 0.5) || half_width < 1) {
    Fail(ErrorCode::kInvalidArgument, "low-pass cutoff must be in (0, 0.5)");
  }
  std::vector<double> taps(2 * half_width + 1);
  double sum = 0.0;
  for (int i = -half_width; i <= half_width; ++i) {
    double h = 2.0 * cutoff * Sinc(2.0 * cutoff * i) *
               Kaiser(static_cast<double>(i) / (half_width + 1), kaiser_beta);
    taps[i + half_width] = h;
    sum += h;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<float> FilterZeroPhase(const std::vector<float>& x,
                                   const std::vector<double>& taps) {
  const auto n = static_cast<long>(x.size());
  const auto half = static_cast<long>(taps.size() / 2);
  std::vector<float> y(x.size());
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    long lo = std::max(0L, i - half);
    long hi = std::min(n - 1, i + half);
    for (long k = lo; k <= hi; ++k) acc += taps[k - i + half] * x[k];
    y[i] = static_cast<float>(acc);
  }
  return y;
}

Waveform Resample(const Waveform& w, int target_rate) {
  if (target_rate <= 0) {
    Fail(ErrorCode::kInvalidArgument, "target sample rate must be positive");
  }
  if (w.sample_rate <= 0) {
    Fail(ErrorCode::kInvalidArgument, "source sample rate must be positive");
  }
  if (target_rate == w.sample_rate) return w;

  // Output sample j sits at input time j * down / up.
  const long g = std::gcd(static_cast<long>(target_rate),
                          static_cast<long>(w.sample_rate));
  const long up = target_rate / g;
  const long down = w.sample_rate / g;
  const double ratio = static_cast<double>(up) / static_cast<double>(down);
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(w.size()) * ratio));
  // Cutoff relative to the input rate, in cycles per input sample.
  const double cutoff = 0.5 * std::min(1.0, ratio) * kRolloff;
  // Kernel support in input samples, widened when decimating.
  const double support = kZeroCrossings / std::min(1.0, ratio);
  const long reach = static_cast<long>(std::ceil(support));

  auto kernel = [&](double d) {
    return 2.0 * cutoff * Sinc(2.0 * cutoff * d) * Kaiser(d / support, kBeta);
  };

  // Phase p = (j * down) mod up; taps indexed by k - floor(t) + reach.
  const bool cache = up <= 4096;
  std::vector<std::vector<double>> phases;
  if (cache) {
    phases.resize(up);
    for (long p = 0; p < up; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up);
      auto& taps = phases[p];
      taps.resize(2 * reach + 2);
      for (long m = -reach; m <= reach + 1; ++m) {
        taps[m + reach] = kernel(frac - static_cast<double>(m));
      }
    }
  }

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  const auto n = static_cast<long>(w.size());
  for (std::size_t j = 0; j < out_len; ++j) {
    const long num = static_cast<long>(j) * down;
    const long base = num / up;
    const long phase = num % up;
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    double acc = 0.0;
    for (long m = -reach; m <= reach + 1; ++m) {
      const long k = base + m;
      if (k < 0 || k >= n) continue;
      const double h = cache ? phases[phase][m + reach]
                             : kernel(frac - static_cast<double>(m));
      acc += w.samples[k] * h;
    }
    out.samples[j] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace advpost
