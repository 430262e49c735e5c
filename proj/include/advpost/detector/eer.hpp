// include/advpost/detector/eer.hpp

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

#ifndef ADVPOST_DETECTOR_EER_HPP_
#define ADVPOST_DETECTOR_EER_HPP_

#include <span>

namespace advpost {

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Equal error rate of a score set where higher means "genuine".
///
/// At threshold t, FAR(t) = |{neg >= t}| / |neg| and FRR(t) = |{pos < t}| /
/// |pos|. The ROC is a step function whose corners sit at the distinct
/// scores (plus one point above the maximum). EER is read off by linear
/// interpolation between the two adjacent corners bracketing FAR = FRR;
/// among several crossings the lowest threshold wins.
///
/// Throws kEmptyInput if either list is empty.
EerResult ComputeEer(std::span<const double> pos_scores,
                     std::span<const double> neg_scores);

}  // namespace advpost

#endif  // ADVPOST_DETECTOR_EER_HPP_
