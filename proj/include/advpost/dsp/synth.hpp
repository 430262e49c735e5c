// include/advpost/dsp/synth.hpp

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

#ifndef ADVPOST_DSP_SYNTH_HPP_
#define ADVPOST_DSP_SYNTH_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Small deterministic signal generators. Used for synthetic interferers,
/// room responses and the self-contained demo corpus.
namespace synth {

/// Syllable-like on/off envelope: sin^0.5 bumps of 0.15-0.35 s separated
/// by gaps drawn from [gap_min_s, gap_max_s], starting after at least
/// `lead_in` samples of silence.
std::vector<float> SyllableEnvelope(std::size_t n, int sample_rate,
                                    std::mt19937_64& rng,
                                    std::size_t lead_in = 800,
                                    double gap_min_s = 0.10,
                                    double gap_max_s = 0.25);

/// Harmonic complex with 1/k amplitudes up to `max_hz`, random f0 in
/// [f0_min, f0_max] and slow vibrato; unit RMS.
std::vector<float> HarmonicSource(std::size_t n, int sample_rate,
                                  std::mt19937_64& rng, double max_hz,
                                  double f0_min = 100.0, double f0_max = 250.0);

/// Gaussian noise restricted to [lo_hz, hi_hz) by FFT masking; unit RMS.
std::vector<float> BandNoise(std::size_t n, int sample_rate,
                             std::mt19937_64& rng, double lo_hz, double hi_hz);

Waveform WhiteNoise(std::size_t n, int sample_rate, std::mt19937_64& rng,
                    double rms = 0.1);

/// Sequence of sustained three-note chords; a stand-in for music.
Waveform ToneComplex(std::size_t n, int sample_rate, std::mt19937_64& rng,
                     double rms = 0.1);

/// Sum of `talkers` independent voiced syllable streams; a stand-in for
/// overlapped speech.
Waveform Babble(std::size_t n, int sample_rate, std::mt19937_64& rng,
                int talkers = 5, double rms = 0.1);

/// Room response: unit direct path followed by noise decaying 60 dB over
/// `rt60_s`.
Waveform ExponentialRir(int sample_rate, std::mt19937_64& rng,
                        double rt60_s = 0.3, double length_s = 0.5);

}  // namespace synth
}  // namespace advpost

#endif  // ADVPOST_DSP_SYNTH_HPP_
