// src/toy/toy_corpus.cpp

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

#include "advpost/toy/toy_corpus.hpp"

#include <random>

#include "advpost/dsp/synth.hpp"
#include "advpost/error.hpp"
#include "advpost/seeds.hpp"

namespace advpost {

void ToyCorpusConfig::Validate() const {
  auto bad = [](const std::string& why) { Fail(ErrorCode::kInvalidConfig, "toy: " + why); };
  if (clips_per_class < 2) bad("clips_per_class must be >= 2");
  if (!(seconds > 0.1)) bad("seconds must be > 0.1");
  if (sample_rate < 8000) bad("sample_rate must be >= 8000");
  if (!(0 < amp_min && amp_min <= amp_max && amp_max < 1)) bad("need 0 < amp_min <= amp_max < 1");
  const double nyquist = 0.5 * sample_rate;
  if (!(0 < harmonic_max_hz && harmonic_max_hz <= nyquist)) bad("harmonic_max_hz out of range");
  if (!(0 <= breath_lo_hz && breath_lo_hz < breath_hi_hz && breath_hi_hz <= nyquist)) {
    bad("breath band must satisfy 0 <= lo < hi <= nyquist");
  }
  if (!(breath_level >= 0)) bad("breath_level must be >= 0");
  if (!(noise_floor >= 0)) bad("noise_floor must be >= 0");
  if (!(lead_in_s >= 0 && lead_in_s < seconds)) bad("lead_in_s must be in [0, seconds)");
  if (!(0 < pause_min_s && pause_min_s <= pause_max_s)) bad("need 0 < pause_min_s <= pause_max_s");
}

Waveform MakeToyClip(ToyRole role, const ToyCorpusConfig& cfg, uint64_t seed) {
  cfg.Validate();
  std::mt19937_64 rng(SplitMix64(seed));
  const auto n = static_cast<std::size_t>(cfg.seconds * cfg.sample_rate);
  const double amp = std::uniform_real_distribution<double>(cfg.amp_min, cfg.amp_max)(rng);
  auto source = synth::HarmonicSource(n, cfg.sample_rate, rng, cfg.harmonic_max_hz);
  if (role == ToyRole::kGenuine && cfg.breath_level > 0) {
    const auto band =
        synth::BandNoise(n, cfg.sample_rate, rng, cfg.breath_lo_hz, cfg.breath_hi_hz);
    for (std::size_t i = 0; i < n; ++i) {
      source[i] += static_cast<float>(cfg.breath_level * band[i]);
    }
  }
  const auto env = synth::SyllableEnvelope(
      n, cfg.sample_rate, rng,
      static_cast<std::size_t>(cfg.lead_in_s * cfg.sample_rate), cfg.pause_min_s,
      cfg.pause_max_s);
  std::normal_distribution<double> gauss(0.0, cfg.noise_floor);
  Waveform w{std::vector<float>(n), cfg.sample_rate};
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(amp * env[i] * source[i] + gauss(rng));
  }
  ClipInPlace(w);
  return w;
}

ToySet MakeToySet(const ToyCorpusConfig& cfg, uint64_t seed) {
  ToySet set;
  const uint64_t gseed = DeriveSeed(seed, "toy-genuine");
  const uint64_t fseed = DeriveSeed(seed, "toy-fake");
  for (int i = 0; i < cfg.clips_per_class; ++i) {
    set.genuine.push_back(MakeToyClip(ToyRole::kGenuine, cfg, DeriveSeed(gseed, uint64_t(i))));
    set.fake.push_back(MakeToyClip(ToyRole::kFake, cfg, DeriveSeed(fseed, uint64_t(i))));
  }
  return set;
}

}  // namespace advpost
