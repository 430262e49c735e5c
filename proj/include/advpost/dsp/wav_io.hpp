// include/advpost/dsp/wav_io.hpp

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

#ifndef ADVPOST_DSP_WAV_IO_HPP_
#define ADVPOST_DSP_WAV_IO_HPP_

#include <filesystem>

#include "advpost/dsp/waveform.hpp"

namespace advpost {

/// Reads a mono RIFF/WAVE file holding PCM16 or IEEE float32 samples.
/// PCM16 values are scaled by 1/32768. The sample rate is kept as stored.
///
/// Throws Error with kUnreadableFile, kMultichannel or kUnsupportedEncoding.
Waveform ReadWav(const std::filesystem::path& path);

/// Writes a PCM16 mono file. Samples outside [-1, 1] are clipped; values
/// are rounded to the nearest 1/32768 step (+1.0 maps to 32767). Missing
/// parent directories are created.
void WriteWav(const Waveform& w, const std::filesystem::path& path);

/// Reads a file and brings it to `sample_rate` when it differs.
Waveform ReadWavAt(const std::filesystem::path& path, int sample_rate);

}  // namespace advpost

#endif  // ADVPOST_DSP_WAV_IO_HPP_
