// include/advpost/toy/toy_corpus.hpp

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

#ifndef ADVPOST_TOY_TOY_CORPUS_HPP_
#define ADVPOST_TOY_TOY_CORPUS_HPP_

#include <cstdint>
#include <vector>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Synthetic two-class corpus for end-to-end runs without real data.
///
/// Both classes are syllable-gated harmonic complexes over a faint noise
/// floor. Genuine clips also carry a weak band of breath-like noise above
/// the harmonics; fakes lack it, the way many vocoders lose aperiodic
/// high-band energy.
struct ToyCorpusConfig {
  int clips_per_class = 100;
  double seconds = 2.0;
  int sample_rate = kCanonicalSampleRate;
  /// Per-clip RMS of the voiced source, drawn uniformly.
  double amp_min = 0.1;
  double amp_max = 0.2;
  double harmonic_max_hz = 3900.0;
  double breath_lo_hz = 4200.0;
  double breath_hi_hz = 8000.0;
  /// Breath-band RMS relative to the voiced source.
  double breath_level = 0.003;
  /// RMS of the stationary background noise.
  double noise_floor = 5e-5;
  /// Silence before the first syllable and between syllables, seconds.
  double lead_in_s = 0.1;
  double pause_min_s = 0.2;
  double pause_max_s = 0.45;

  void Validate() const;
  bool operator==(const ToyCorpusConfig&) const = default;
};

enum class ToyRole { kGenuine, kFake };

Waveform MakeToyClip(ToyRole role, const ToyCorpusConfig& cfg, uint64_t seed);

struct ToySet {
  std::vector<Waveform> genuine;
  std::vector<Waveform> fake;
};

/// clips_per_class clips of each role; clip i of each role uses its own
/// sub-seed, so sets with different seeds are independent.
ToySet MakeToySet(const ToyCorpusConfig& cfg, uint64_t seed);

}  // namespace advpost

#endif  // ADVPOST_TOY_TOY_CORPUS_HPP_
