// tests/lfcc_reference.hpp

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

#ifndef ADVPOST_TESTS_LFCC_REFERENCE_HPP_
#define ADVPOST_TESTS_LFCC_REFERENCE_HPP_

// Plain-loop LFCC used as an oracle. Shares no code with the extractor:
// direct DFT, filter weights from the triangle definition, DCT-II from its
// formula, regression deltas with edge replication.

#include <algorithm>
#include <cmath>
#include <vector>

#include "advpost/dsp/lfcc.hpp"

namespace advpost::testing {

using Matrix = std::vector<std::vector<double>>;

inline Matrix ReferenceDeltas(const Matrix& c, int n) {
  const int frames = static_cast<int>(c.size());
  const int dim = frames ? static_cast<int>(c[0].size()) : 0;
  double denom = 0.0;
  for (int k = 1; k <= n; ++k) denom += 2.0 * k * k;
  Matrix d(frames, std::vector<double>(dim, 0.0));
  for (int t = 0; t < frames; ++t) {
    for (int j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 1; k <= n; ++k) {
        const int ahead = std::min(frames - 1, t + k);
        const int behind = std::max(0, t - k);
        acc += k * (c[ahead][j] - c[behind][j]);
      }
      d[t][j] = acc / denom;
    }
  }
  return d;
}

inline Matrix ReferenceLfcc(const std::vector<float>& x, const LfccConfig& cfg) {
  const int win = static_cast<int>(std::lround(cfg.win_ms * 1e-3 * cfg.sample_rate));
  const int hop = static_cast<int>(std::lround(cfg.hop_ms * 1e-3 * cfg.sample_rate));
  const int nfft = cfg.n_fft;
  const int bins = nfft / 2 + 1;
  const int m = cfg.n_filters;
  const int frames = (static_cast<int>(x.size()) - win) / hop + 1;
  const double nyquist = 0.5 * cfg.sample_rate;

  Matrix cep(frames, std::vector<double>(cfg.n_coeff));
  std::vector<double> frame(win), power(bins), logfb(m);
  for (int t = 0; t < frames; ++t) {
    for (int i = 0; i < win; ++i) {
      const double hamming = 0.54 - 0.46 * std::cos(2.0 * M_PI * i / (win - 1));
      frame[i] = x[t * hop + i] * hamming;
    }
    for (int k = 0; k < bins; ++k) {
      double re = 0.0, im = 0.0;
      for (int i = 0; i < win; ++i) {
        const double phase = -2.0 * M_PI * double(k) * double(i) / nfft;
        re += frame[i] * std::cos(phase);
        im += frame[i] * std::sin(phase);
      }
      power[k] = re * re + im * im;
    }
    for (int j = 0; j < m; ++j) {
      // Filter j rises from edge j to edge j+1 and falls to edge j+2, with
      // m+2 edges spread evenly over [0, nyquist].
      const double left = nyquist * j / (m + 1);
      const double centre = nyquist * (j + 1) / (m + 1);
      const double right = nyquist * (j + 2) / (m + 1);
      double e = 0.0;
      for (int k = 0; k < bins; ++k) {
        const double f = double(k) * cfg.sample_rate / nfft;
        double w = 0.0;
        if (f > left && f <= centre) w = (f - left) / (centre - left);
        else if (f > centre && f < right) w = (right - f) / (right - centre);
        e += w * power[k];
      }
      logfb[j] = std::log(e + cfg.log_floor);
    }
    for (int k = 0; k < cfg.n_coeff; ++k) {
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += logfb[j] * std::cos(M_PI * k * (j + 0.5) / m);
      cep[t][k] = acc * (k == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m));
    }
  }
  if (!cfg.include_deltas) return cep;
  const auto d1 = ReferenceDeltas(cep, cfg.delta_window);
  const auto d2 = ReferenceDeltas(d1, cfg.delta_window);
  Matrix out(frames);
  for (int t = 0; t < frames; ++t) {
    out[t] = cep[t];
    out[t].insert(out[t].end(), d1[t].begin(), d1[t].end());
    out[t].insert(out[t].end(), d2[t].begin(), d2[t].end());
  }
  return out;
}

}  // namespace advpost::testing

#endif  // ADVPOST_TESTS_LFCC_REFERENCE_HPP_
