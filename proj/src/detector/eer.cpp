// src/detector/eer.cpp

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

#include "advpost/detector/eer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "advpost/error.hpp"

namespace advpost {

EerResult ComputeEer(std::span<const double> pos_scores,
                     std::span<const double> neg_scores) {
  if (pos_scores.empty() || neg_scores.empty()) {
    Fail(ErrorCode::kEmptyInput, "EER needs nonempty positive and negative scores");
  }
  std::vector<double> pos(pos_scores.begin(), pos_scores.end());
  std::vector<double> neg(neg_scores.begin(), neg_scores.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size() + 1);
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(),
             std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  const double top = thresholds.back();
  thresholds.push_back(
      std::nextafter(top, std::numeric_limits<double>::infinity()));

  const double np = static_cast<double>(pos.size());
  const double nn = static_cast<double>(neg.size());
  std::size_t ip = 0;  // pos strictly below t
  std::size_t in = 0;  // neg strictly below t
  double prev_far = 0.0, prev_frr = 0.0, prev_t = 0.0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    while (ip < pos.size() && pos[ip] < t) ++ip;
    while (in < neg.size() && neg[in] < t) ++in;
    const double far = (nn - static_cast<double>(in)) / nn;
    const double frr = static_cast<double>(ip) / np;
    if (far <= frr) {
      if (i == 0 || far == frr) return {far, t};
      // Crossing inside the segment from the previous corner.
      const double d0 = prev_far - prev_frr;
      const double d1 = far - frr;
      const double alpha = d0 / (d0 - d1);
      return {prev_far + alpha * (far - prev_far),
              prev_t + alpha * (t - prev_t)};
    }
    prev_far = far;
    prev_frr = frr;
    prev_t = t;
  }
  // Unreachable: above the maximum score FAR is 0 <= FRR.
  Fail(ErrorCode::kInternal, "EER sweep found no crossing");
}

}  // namespace advpost
