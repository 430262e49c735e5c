// include/advpost/eval/report.hpp

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

#ifndef ADVPOST_EVAL_REPORT_HPP_
#define ADVPOST_EVAL_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "advpost/detector/detector.hpp"
#include "advpost/detector/eer.hpp"
#include "advpost/dsp/vad.hpp"
#include "advpost/dsp/waveform.hpp"

namespace advpost {

inline constexpr int kEvalReportSchemaVersion = 1;

/// Anything that maps a clip to a "genuine" score (higher = more genuine).
/// Throwing from `score` marks the clip as a scoring failure.
struct Scorer {
  std::string name;
  std::function<double(const Waveform&)> score;
};

/// Wraps a detector (kept in eval mode by the caller) as a scorer.
Scorer MakeScorer(std::string name, const DetectorModel& detector);

struct EvalClip {
  std::string id;
  Waveform audio;
};

enum class ClipRole { kGenuine, kFake };

struct ScoreRow {
  std::string id;
  std::string detector;
  ClipRole role = ClipRole::kFake;
  double score = 0.0;
  double threshold = 0.0;
  /// Fake accepted as genuine (score >= threshold). Always false for genuines.
  bool wrong = false;
};

struct Exclusion {
  std::string id;
  std::string detector;
  ClipRole role = ClipRole::kFake;
  std::string reason;
};

struct DsrResult {
  double dsr = 0.0;
  int64_t W = 0;
  /// Number of fake clips scored successfully by every detector.
  int64_t A = 0;
  int64_t N = 0;
  std::vector<std::string> detectors;
  std::vector<double> thresholds;
  std::vector<double> detector_eers;
  std::vector<ScoreRow> table;
  std::vector<Exclusion> excluded;
};

/// Detection success rate W / (A * N). Each detector's threshold is its own
/// EER operating point on (genuines vs fakes); W counts fakes scoring at or
/// above it, summed over detectors. A fake that fails on any detector is
/// dropped from every detector's count; a genuine that fails is dropped
/// from that detector's threshold only. The result is recounted from the
/// per-file table before returning.
DsrResult ComputeDsr(const std::vector<Scorer>& detectors, const std::vector<EvalClip>& fakes,
                     const std::vector<EvalClip>& genuines);

/// W / (A * N) recounted from the table rows.
double RecountDsr(const std::vector<ScoreRow>& table, int64_t n_detectors);

struct EerDeltaResult {
  EerResult before;
  EerResult after;
};

/// EER with genuines as positives and each fake set as negatives.
EerDeltaResult EerDelta(const Scorer& detector, const std::vector<EvalClip>& genuines,
                        const std::vector<EvalClip>& fakes_before,
                        const std::vector<EvalClip>& fakes_after);

struct MtSplit {
  std::optional<double> mean_speech;
  std::optional<double> mean_silence;
  std::size_t speech_samples = 0;
  std::size_t silence_samples = 0;
};

/// Mean modification magnitude over speech and silence samples, with the
/// split taken from the original's frame energies. A class with no samples
/// is left empty.
MtSplit SilenceSpeechMt(const Waveform& original, const Waveform& residual,
                        const VadConfig& vad = {});

struct SpectrogramConfig {
  int n_fft = 512;
  double hop_ms = 10.0;
  double floor_db = -80.0;
  int bands = 8;
  bool operator==(const SpectrogramConfig&) const = default;
};

/// Log-magnitude spectrogram [frames, n_fft/2+1] in dB re. full scale,
/// Hann window, floored at floor_db.
torch::Tensor LogSpectrogram(const Waveform& w, const SpectrogramConfig& cfg = {});

struct SpectrogramDiffResult {
  /// Mean |after_dB - before_dB| in equal-width frequency bands, low first.
  std::vector<double> band_mean_abs_db;
  std::vector<double> band_edges_hz;
  std::filesystem::path png;
  std::filesystem::path npy;
  std::filesystem::path json;
};

/// Writes <out>.png (before, after and difference panels), <out>.npy
/// (float32 [3, frames, bins]) and <out>.json (per-band statistics).
/// Pass an empty `out` to compute the statistics only.
SpectrogramDiffResult SpectrogramDiff(const Waveform& before, const Waveform& after,
                                      const std::filesystem::path& out,
                                      const SpectrogramConfig& cfg = {});

struct EvalReport {
  std::optional<EerDeltaResult> eer;
  std::optional<DsrResult> dsr;
  std::optional<double> mean_Mt_speech;
  std::optional<double> mean_Mt_silence;
  /// Share of utterances whose silence mean is below their speech mean,
  /// over utterances where both classes exist.
  std::optional<double> silence_below_speech_fraction;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json ToJson(const EvalReport& report);
/// Per-file score table as CSV: id,detector,role,score,threshold,wrong.
std::string ScoreTableCsv(const std::vector<ScoreRow>& table);

}  // namespace advpost

#endif  // ADVPOST_EVAL_REPORT_HPP_
