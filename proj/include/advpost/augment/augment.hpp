// include/advpost/augment/augment.hpp

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

#ifndef ADVPOST_AUGMENT_AUGMENT_HPP_
#define ADVPOST_AUGMENT_AUGMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "advpost/dsp/vad.hpp"
#include "advpost/dsp/waveform.hpp"

namespace advpost {

enum class AugmentKind {
  kNoise,
  kMusic,
  kBabble,
  kReverb,
  kVolume,
  kCodecMp3,
  kCodecOgg,
  kCodecAac,
  kCodecOpus,
  kDownsample,
};

std::string_view AugmentKindName(AugmentKind kind);
AugmentKind AugmentKindFromName(std::string_view name);
bool IsCodecKind(AugmentKind kind);

/// One entry of the augmentation menu. Only the fields relevant to `kind`
/// are read; ranges are sampled uniformly.
struct AugmentSpec {
  AugmentKind kind = AugmentKind::kNoise;
  double snr_db_min = 0.0;
  double snr_db_max = 20.0;
  double gain_db_min = -10.0;
  double gain_db_max = 20.0;
  /// Codec quality on a normalized [0, 1] scale (1 = best); mapped onto
  /// each encoder's own quality or bitrate setting.
  double quality_min = 0.0;
  double quality_max = 1.0;
  int downsample_rate = 8000;

  void Validate() const;
  bool operator==(const AugmentSpec&) const = default;
};

nlohmann::json ToJson(const AugmentSpec& spec);
AugmentSpec AugmentSpecFromJson(const nlohmann::json& j);

/// All ten kinds with default parameters.
std::vector<AugmentSpec> DefaultAugmentMenu();

struct CodecOptions {
  /// Directory holding an `ffmpeg` binary. When empty, the ADVPOST_CODEC_DIR
  /// environment variable and then PATH are searched.
  std::filesystem::path encoder_dir;
  /// Never call an external encoder; always use the built-in surrogate.
  bool force_surrogate = false;
  bool operator==(const CodecOptions&) const = default;
};

/// Interferer pools and room responses. Empty pools make the matching
/// kinds fail with kInvalidArgument.
struct AugmentResources {
  std::vector<Waveform> noise;
  std::vector<Waveform> music;
  std::vector<Waveform> babble;
  std::vector<Waveform> rirs;
  CodecOptions codec;
  VadConfig vad;

  /// Small synthetic pools: white noise, chords, babble, decaying RIRs.
  static AugmentResources Synthetic(uint64_t seed, int sample_rate = kCanonicalSampleRate,
                                    int per_pool = 4, double seconds = 4.0);
};

/// w + g * interferer, where g makes the voiced-region power ratio equal
/// snr_db. The interferer is looped or truncated to w's length. Output is
/// clipped. A silent w is returned unchanged.
Waveform MixAdditive(const Waveform& w, const Waveform& interferer, double snr_db,
                     const VadConfig& vad = {});

/// Full convolution with `rir` truncated to w's length, rescaled so the
/// output peak equals the input peak.
Waveform ApplyReverb(const Waveform& w, const Waveform& rir);

/// Scales by 10^(gain_db/20) and clips.
Waveform ApplyGain(const Waveform& w, double gain_db);

/// Round trip through `target_rate` and back to the original rate; the
/// length is restored exactly.
Waveform ApplyDownsample(const Waveform& w, int target_rate);

struct CodecResult {
  Waveform output;
  double quality = 1.0;
  bool surrogate = false;
  std::string backend;
};

/// Encode/decode round trip at a fixed normalized quality. Uses ffmpeg
/// when available, otherwise a bit-depth reduction (4 to 16 bits) plus a
/// low-pass (2 to 8 kHz) both driven by quality. The decoded signal is
/// delay-compensated and trimmed or zero-padded to the input length.
CodecResult ApplyCodecAtQuality(const Waveform& w, AugmentKind kind, double quality,
                                const CodecOptions& options = {});

/// ApplyCodecAtQuality with quality drawn from spec's range.
CodecResult ApplyCodec(const Waveform& w, const AugmentSpec& spec, uint64_t seed,
                       const CodecOptions& options = {});

/// The deterministic built-in lossy surrogate.
Waveform CodecSurrogate(const Waveform& w, double quality);

struct AugmentResult {
  Waveform output;
  AugmentSpec chosen;
  std::size_t menu_index = 0;
  /// Drawn parameters, plus "codec_surrogate" for codec kinds.
  nlohmann::json params;
};

/// Picks one menu entry uniformly and applies it with parameters drawn
/// from its ranges. Output depends only on (w, menu, seed, resources).
AugmentResult AugmentRandom(const Waveform& w, const std::vector<AugmentSpec>& menu,
                            uint64_t seed, const AugmentResources& resources);

}  // namespace advpost

#endif  // ADVPOST_AUGMENT_AUGMENT_HPP_
