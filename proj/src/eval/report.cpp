// src/eval/report.cpp

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

#include "advpost/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <png.h>

#include "advpost/adv/losses.hpp"
#include "advpost/error.hpp"

namespace advpost {
namespace {

namespace fs = std::filesystem;

const char* RoleName(ClipRole role) { return role == ClipRole::kFake ? "fake" : "genuine"; }

void EnsureParent(const fs::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  if (ec) Fail(ErrorCode::kUnwritablePath, "cannot create directory for " + p.string());
}

void WriteText(const fs::path& p, const std::string& text) {
  EnsureParent(p);
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write " + p.string());
}

void WriteNpyFloat32(const fs::path& p, const torch::Tensor& t) {
  const auto data = t.to(torch::kFloat32).contiguous();
  std::string shape = "(";
  for (int64_t d : data.sizes()) shape += std::to_string(d) + ", ";
  if (data.dim() > 1) shape.resize(shape.size() - 1);
  if (data.dim() > 0) shape.back() = ')';
  else shape += ")";
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': " + shape + ", }";
  const std::size_t total = 10 + header.size() + 1;
  header.append((64 - total % 64) % 64, ' ');
  header += '\n';
  EnsureParent(p);
  std::ofstream f(p, std::ios::binary);
  f.write("\x93NUMPY\x01\x00", 8);
  const auto len = static_cast<uint16_t>(header.size());
  const char len_bytes[2] = {static_cast<char>(len & 0xFF), static_cast<char>(len >> 8)};
  f.write(len_bytes, 2);
  f << header;
  f.write(reinterpret_cast<const char*>(data.data_ptr<float>()),
          static_cast<std::streamsize>(data.numel() * sizeof(float)));
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write " + p.string());
}

struct Rgb {
  uint8_t r, g, b;
};

Rgb Gray(double v) {
  const auto c = static_cast<uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
  return {c, c, c};
}

// Blue for negative, white for zero, red for positive; v in [-1, 1].
Rgb Diverging(double v) {
  v = std::clamp(v, -1.0, 1.0);
  const auto fade = static_cast<uint8_t>(std::lround(255.0 * (1.0 - std::abs(v))));
  return v >= 0 ? Rgb{255, fade, fade} : Rgb{fade, fade, 255};
}

void WritePng(const fs::path& p, int width, int height, const std::vector<Rgb>& pixels) {
  EnsureParent(p);
  FILE* fp = std::fopen(p.c_str(), "wb");
  if (fp == nullptr) Fail(ErrorCode::kUnwritablePath, "cannot write " + p.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (png == nullptr || info == nullptr || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    Fail(ErrorCode::kUnwritablePath, "PNG encoding failed for " + p.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<uint8_t> row(static_cast<std::size_t>(width) * 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Rgb& c = pixels[static_cast<std::size_t>(y) * width + x];
      row[3 * x] = c.r;
      row[3 * x + 1] = c.g;
      row[3 * x + 2] = c.b;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

Scorer MakeScorer(std::string name, const DetectorModel& detector) {
  return {std::move(name), [&detector](const Waveform& w) { return detector.ScoreWaveform(w); }};
}

double RecountDsr(const std::vector<ScoreRow>& table, int64_t n_detectors) {
  std::set<std::string> fakes;
  int64_t wrong = 0;
  for (const auto& row : table) {
    if (row.role != ClipRole::kFake) continue;
    fakes.insert(row.id);
    if (row.score >= row.threshold) ++wrong;
  }
  const auto a = static_cast<int64_t>(fakes.size());
  if (a == 0 || n_detectors == 0) Fail(ErrorCode::kEmptyInput, "no fake rows to recount");
  return static_cast<double>(wrong) / static_cast<double>(a * n_detectors);
}

DsrResult ComputeDsr(const std::vector<Scorer>& detectors, const std::vector<EvalClip>& fakes,
                     const std::vector<EvalClip>& genuines) {
  if (detectors.empty()) Fail(ErrorCode::kEmptyInput, "no detectors given");
  if (fakes.empty()) Fail(ErrorCode::kEmptyInput, "fake set is empty");
  if (genuines.empty()) Fail(ErrorCode::kEmptyInput, "genuine set is empty");

  const std::size_t n = detectors.size();
  std::vector<std::vector<std::optional<double>>> fake_scores(n), genuine_scores(n);
  DsrResult r;
  std::set<std::size_t> failed_fakes;
  for (std::size_t d = 0; d < n; ++d) {
    r.detectors.push_back(detectors[d].name);
    auto run = [&](const std::vector<EvalClip>& clips, ClipRole role,
                   std::vector<std::optional<double>>& out) {
      out.resize(clips.size());
      for (std::size_t i = 0; i < clips.size(); ++i) {
        try {
          const double s = detectors[d].score(clips[i].audio);
          if (!std::isfinite(s)) Fail(ErrorCode::kNonFinite, "non-finite score");
          out[i] = s;
        } catch (const std::exception& e) {
          r.excluded.push_back({clips[i].id, detectors[d].name, role, e.what()});
          if (role == ClipRole::kFake) failed_fakes.insert(i);
        }
      }
    };
    run(fakes, ClipRole::kFake, fake_scores[d]);
    run(genuines, ClipRole::kGenuine, genuine_scores[d]);
  }
  if (failed_fakes.size() == fakes.size()) {
    Fail(ErrorCode::kScoringFailure, "every fake clip failed scoring");
  }

  for (std::size_t d = 0; d < n; ++d) {
    std::vector<double> pos, neg;
    for (const auto& s : genuine_scores[d]) {
      if (s) pos.push_back(*s);
    }
    for (std::size_t i = 0; i < fakes.size(); ++i) {
      if (!failed_fakes.count(i)) neg.push_back(*fake_scores[d][i]);
    }
    if (pos.empty()) {
      Fail(ErrorCode::kScoringFailure,
           "every genuine clip failed scoring on detector '" + detectors[d].name + "'");
    }
    const auto eer = ComputeEer(pos, neg);
    r.thresholds.push_back(eer.threshold);
    r.detector_eers.push_back(eer.eer);
    for (std::size_t i = 0; i < fakes.size(); ++i) {
      if (failed_fakes.count(i)) continue;
      const double s = *fake_scores[d][i];
      const bool wrong = s >= eer.threshold;
      r.W += wrong ? 1 : 0;
      r.table.push_back({fakes[i].id, detectors[d].name, ClipRole::kFake, s, eer.threshold, wrong});
    }
    for (std::size_t i = 0; i < genuines.size(); ++i) {
      if (genuine_scores[d][i]) {
        r.table.push_back({genuines[i].id, detectors[d].name, ClipRole::kGenuine,
                           *genuine_scores[d][i], eer.threshold, false});
      }
    }
  }
  r.A = static_cast<int64_t>(fakes.size() - failed_fakes.size());
  r.N = static_cast<int64_t>(n);
  r.dsr = static_cast<double>(r.W) / static_cast<double>(r.A * r.N);
  if (RecountDsr(r.table, r.N) != r.dsr) {
    Fail(ErrorCode::kInternal, "DSR recount from the score table disagrees");
  }
  return r;
}

EerDeltaResult EerDelta(const Scorer& detector, const std::vector<EvalClip>& genuines,
                        const std::vector<EvalClip>& fakes_before,
                        const std::vector<EvalClip>& fakes_after) {
  auto scores = [&](const std::vector<EvalClip>& clips) {
    std::vector<double> s;
    s.reserve(clips.size());
    for (const auto& c : clips) s.push_back(detector.score(c.audio));
    return s;
  };
  const auto pos = scores(genuines);
  return {ComputeEer(pos, scores(fakes_before)), ComputeEer(pos, scores(fakes_after))};
}

MtSplit SilenceSpeechMt(const Waveform& original, const Waveform& residual, const VadConfig& vad) {
  const auto mt = ModificationMagnitude(residual, original);
  const auto mask = VoicedMask(original, vad);
  double speech = 0.0, silence = 0.0;
  MtSplit r;
  for (std::size_t i = 0; i < mt.size(); ++i) {
    if (mask[i]) {
      speech += mt[i];
      ++r.speech_samples;
    } else {
      silence += mt[i];
      ++r.silence_samples;
    }
  }
  if (r.speech_samples > 0) r.mean_speech = speech / static_cast<double>(r.speech_samples);
  if (r.silence_samples > 0) r.mean_silence = silence / static_cast<double>(r.silence_samples);
  return r;
}

torch::Tensor LogSpectrogram(const Waveform& w, const SpectrogramConfig& cfg) {
  if (cfg.n_fft < 16 || !(cfg.hop_ms > 0) || cfg.bands < 1) {
    Fail(ErrorCode::kInvalidArgument, "invalid spectrogram configuration");
  }
  const auto hop = std::max<int64_t>(1, std::lround(cfg.hop_ms * 1e-3 * w.sample_rate));
  auto x = ToTensor(w, torch::kFloat64);
  if (x.size(0) < cfg.n_fft) {
    x = torch::constant_pad_nd(x, {0, cfg.n_fft - x.size(0)});
  }
  const auto window = torch::hann_window(cfg.n_fft, torch::TensorOptions().dtype(torch::kFloat64));
  const auto frames = x.unfold(0, cfg.n_fft, hop) * window;
  // Scaled so a full-scale sinusoid at a bin centre reads 0 dB.
  const auto mag = torch::abs(torch::fft::rfft(frames)) * (2.0 / window.sum().item<double>());
  return torch::clamp_min(20.0 * torch::log10(mag + 1e-300), cfg.floor_db);
}

SpectrogramDiffResult SpectrogramDiff(const Waveform& before, const Waveform& after,
                                      const fs::path& out, const SpectrogramConfig& cfg) {
  if (before.size() != after.size()) {
    Fail(ErrorCode::kLengthMismatch, "spectrogram diff needs equal lengths");
  }
  if (before.sample_rate != after.sample_rate) {
    Fail(ErrorCode::kInvalidArgument, "spectrogram diff needs equal sample rates");
  }
  const auto a = LogSpectrogram(before, cfg);
  const auto b = LogSpectrogram(after, cfg);
  const auto diff = b - a;
  const int64_t frames = a.size(0);
  const int64_t bins = a.size(1);

  SpectrogramDiffResult r;
  const auto abs_diff = diff.abs();
  const double nyquist = 0.5 * before.sample_rate;
  for (int k = 0; k < cfg.bands; ++k) {
    const int64_t lo = bins * k / cfg.bands;
    const int64_t hi = bins * (k + 1) / cfg.bands;
    r.band_mean_abs_db.push_back(abs_diff.narrow(1, lo, hi - lo).mean().item<double>());
    r.band_edges_hz.push_back(nyquist * k / cfg.bands);
  }
  r.band_edges_hz.push_back(nyquist);
  if (out.empty()) return r;

  r.png = fs::path(out.string() + ".png");
  r.npy = fs::path(out.string() + ".npy");
  r.json = fs::path(out.string() + ".json");
  WriteNpyFloat32(r.npy, torch::stack({a, b, diff}));

  constexpr int kGap = 4;
  const int width = static_cast<int>(frames);
  const int panel = static_cast<int>(bins);
  const int height = 3 * panel + 2 * kGap;
  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height, Rgb{0, 0, 0});
  const double span = -cfg.floor_db;
  const double diff_scale = std::max(1e-9, abs_diff.max().item<double>());
  auto acc_a = a.accessor<double, 2>();
  auto acc_b = b.accessor<double, 2>();
  auto acc_d = diff.accessor<double, 2>();
  for (int x = 0; x < width; ++x) {
    for (int bin = 0; bin < panel; ++bin) {
      const int y = panel - 1 - bin;  // low frequencies at the bottom
      pixels[static_cast<std::size_t>(y) * width + x] = Gray((acc_a[x][bin] + span) / span);
      pixels[static_cast<std::size_t>(y + panel + kGap) * width + x] =
          Gray((acc_b[x][bin] + span) / span);
      pixels[static_cast<std::size_t>(y + 2 * (panel + kGap)) * width + x] =
          Diverging(acc_d[x][bin] / diff_scale);
    }
  }
  WritePng(r.png, width, height, pixels);

  nlohmann::json j{{"band_edges_hz", r.band_edges_hz},
                   {"band_mean_abs_log_diff_db", r.band_mean_abs_db},
                   {"frames", frames},
                   {"bins", bins},
                   {"n_fft", cfg.n_fft},
                   {"hop_ms", cfg.hop_ms},
                   {"floor_db", cfg.floor_db},
                   {"panels", {"before_db", "after_db", "after_minus_before_db"}}};
  WriteText(r.json, j.dump(2) + "\n");
  return r;
}

nlohmann::json ToJson(const EvalReport& report) {
  nlohmann::json j{{"schema_version", kEvalReportSchemaVersion}};
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  if (report.eer) {
    j["eer_before"] = report.eer->before.eer;
    j["eer_after"] = report.eer->after.eer;
    j["eer_threshold_before"] = report.eer->before.threshold;
    j["eer_threshold_after"] = report.eer->after.threshold;
  } else {
    j["eer_before"] = nullptr;
    j["eer_after"] = nullptr;
  }
  if (report.dsr) {
    const auto& d = *report.dsr;
    j["dsr"] = d.dsr;
    j["W"] = d.W;
    j["A"] = d.A;
    j["N"] = d.N;
    nlohmann::json dets = nlohmann::json::array();
    for (std::size_t i = 0; i < d.detectors.size(); ++i) {
      dets.push_back({{"name", d.detectors[i]},
                      {"threshold", d.thresholds[i]},
                      {"eer", d.detector_eers[i]}});
    }
    j["detectors"] = dets;
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& e : d.excluded) {
      ex.push_back({{"id", e.id}, {"detector", e.detector}, {"role", RoleName(e.role)},
                    {"reason", e.reason}});
    }
    j["excluded"] = ex;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : d.table) {
      rows.push_back({{"id", row.id}, {"detector", row.detector}, {"role", RoleName(row.role)},
                      {"score", row.score}, {"threshold", row.threshold}, {"wrong", row.wrong}});
    }
    j["per_file"] = rows;
  } else {
    j["dsr"] = nullptr;
  }
  j["mean_Mt_speech"] = opt(report.mean_Mt_speech);
  j["mean_Mt_silence"] = opt(report.mean_Mt_silence);
  j["silence_below_speech_fraction"] = opt(report.silence_below_speech_fraction);
  j["metadata"] = report.metadata;
  j["metadata"]["A_counts"] = "fake samples scored by every detector";
  j["metadata"]["wrong_detection"] = "fake score >= detector EER threshold";
  return j;
}

std::string ScoreTableCsv(const std::vector<ScoreRow>& table) {
  std::ostringstream out;
  out.precision(17);
  out << "id,detector,role,score,threshold,wrong\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const auto& r : table) {
    out << quote(r.id) << ',' << quote(r.detector) << ',' << RoleName(r.role) << ',' << r.score
        << ',' << r.threshold << ',' << (r.wrong ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace advpost
