// include/advpost/io/config.hpp

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

#ifndef ADVPOST_IO_CONFIG_HPP_
#define ADVPOST_IO_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "advpost/adv/trainer.hpp"
#include "advpost/augment/augment.hpp"
#include "advpost/detector/detector.hpp"
#include "advpost/detector/train.hpp"
#include "advpost/dsp/lfcc.hpp"
#include "advpost/eval/report.hpp"
#include "advpost/rgn/generator.hpp"
#include "advpost/toy/toy_corpus.hpp"

namespace advpost {

inline constexpr int kConfigSchemaVersion = 1;

struct AugmentSection {
  std::vector<AugmentSpec> menu = DefaultAugmentMenu();
  /// Augmented copies written per negative clip.
  int copies_per_negative = 1;
  /// Also augment target-speaker clips.
  bool augment_positives = false;
  /// Directories of interferer / RIR WAVs. Empty selects synthetic
  /// stand-ins.
  std::string noise_dir;
  std::string music_dir;
  std::string babble_dir;
  std::string rir_dir;
  /// Directory of an ffmpeg binary; see CodecOptions.
  std::string codec_dir;
  bool force_surrogate_codec = false;
  bool operator==(const AugmentSection&) const = default;
};

struct DetectorSection {
  DetectorArch arch;
  /// `seed` is ignored here; it is derived from the global seed.
  DetectorTrainConfig train;
  bool operator==(const DetectorSection&) const = default;
};

struct EvalSection {
  VadConfig vad;
  SpectrogramConfig spectrogram;
  /// Number of clips that get spectrogram-difference artefacts.
  int spectrogram_examples = 3;
  bool operator==(const EvalSection&) const = default;
};

/// Default artefact locations. Command-line flags take precedence.
struct IoSection {
  std::string manifest;
  std::string detector_checkpoint;
  std::string generator_checkpoint;
  std::vector<std::string> eval_detectors;
  std::string eval_manifest;
  std::string processed_manifest;
  bool operator==(const IoSection&) const = default;
};

struct RunConfig {
  int schema_version = kConfigSchemaVersion;
  uint64_t seed = 0;
  LfccConfig lfcc;
  AugmentSection augment;
  DetectorSection detector;
  GeneratorArch rgn;
  /// `seed` is ignored here; it is derived from the global seed.
  TrainSchedule train;
  EvalSection eval;
  IoSection io;
  ToyCorpusConfig toy;

  void Validate() const;
  bool operator==(const RunConfig&) const = default;
};

/// Parses YAML text. Missing keys keep their defaults; unknown keys, type
/// errors and failed validation raise kInvalidConfig (kConfigParse for
/// syntax errors) with the line and dotted key in the message.
RunConfig ParseConfig(const std::string& yaml_text, const std::string& source_name = "<config>");
RunConfig LoadConfig(const std::filesystem::path& path);

/// Every field, defaults included.
std::string DumpConfig(const RunConfig& cfg);
void SaveConfig(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace advpost

#endif  // ADVPOST_IO_CONFIG_HPP_
