// tools/advpost_cli.cpp

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

// Command-line driver: prepare, train-detector, train-rgn, apply, eval, report.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "advpost/adv/trainer.hpp"
#include "advpost/augment/augment.hpp"
#include "advpost/detector/detector.hpp"
#include "advpost/detector/train.hpp"
#include "advpost/dsp/wav_io.hpp"
#include "advpost/error.hpp"
#include "advpost/eval/report.hpp"
#include "advpost/io/checkpoint.hpp"
#include "advpost/io/config.hpp"
#include "advpost/io/manifest.hpp"
#include "advpost/rgn/generator.hpp"
#include "advpost/seeds.hpp"
#include "advpost/toy/toy_corpus.hpp"

namespace fs = std::filesystem;
using advpost::ErrorCode;
using advpost::Fail;
using nlohmann::json;

namespace {

// Process exit codes. Documented in the README.
enum Exit : int {
  kOk = 0,
  kInternalError = 1,
  kUsage = 2,
  kBadConfig = 3,
  kMissingArtifact = 4,
  kBadInput = 5,
  kUnwritable = 6,
  kDiverged = 7,
  kScoring = 8,
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kConfigParse:
      return kBadConfig;
    case ErrorCode::kMissingArtifact:
    case ErrorCode::kBadCheckpoint:
      return kMissingArtifact;
    case ErrorCode::kUnwritablePath:
      return kUnwritable;
    case ErrorCode::kNonFinite:
      return kDiverged;
    case ErrorCode::kScoringFailure:
      return kScoring;
    case ErrorCode::kInternal:
      return kInternalError;
    default:
      return kBadInput;
  }
}

void PrintError(const std::string& name, int exit_code, const std::string& message) {
  std::cerr << json{{"error", name}, {"exit_code", exit_code}, {"message", message}}.dump()
            << std::endl;
}

struct CommonOptions {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out;
  int jobs = 1;
};

void AddCommon(CLI::App* cmd, CommonOptions& o, const std::string& default_out) {
  o.out = default_out;
  cmd->add_option("--config", o.config, "YAML run configuration");
  cmd->add_option("--seed", o.seed, "Global seed (overrides the config)");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Parallel workers for per-file work")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
}

advpost::RunConfig ResolveConfig(const CommonOptions& o) {
  advpost::RunConfig cfg = o.config.empty() ? advpost::RunConfig{} : advpost::LoadConfig(o.config);
  if (o.seed) cfg.seed = *o.seed;
  cfg.Validate();
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) Fail(ErrorCode::kUnwritablePath, "cannot create output directory " + o.out);
  advpost::SaveConfig(cfg, fs::path(o.out) / "resolved_config.yaml");
  return cfg;
}

std::string Pick(const std::string& flag, const std::string& from_config, const char* what) {
  const std::string& v = flag.empty() ? from_config : flag;
  if (v.empty()) {
    Fail(ErrorCode::kMissingArtifact, std::string("no ") + what + " given");
  }
  return v;
}

void RequireFile(const fs::path& p, const char* what) {
  if (!fs::exists(p)) {
    Fail(ErrorCode::kMissingArtifact, std::string(what) + " not found: " + p.string());
  }
}

template <class F>
void ParallelFor(std::size_t n, int jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<advpost::Waveform> LoadPool(const std::string& dir, int sample_rate) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".wav") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<advpost::Waveform> pool;
  for (const auto& f : files) pool.push_back(advpost::ReadWavAt(f, sample_rate));
  if (pool.empty()) Fail(ErrorCode::kMissingArtifact, "no .wav files in " + dir);
  return pool;
}

advpost::AugmentResources BuildResources(const advpost::RunConfig& cfg) {
  const int sr = cfg.lfcc.sample_rate;
  auto res = advpost::AugmentResources::Synthetic(cfg.seed, sr);
  if (!cfg.augment.noise_dir.empty()) res.noise = LoadPool(cfg.augment.noise_dir, sr);
  if (!cfg.augment.music_dir.empty()) res.music = LoadPool(cfg.augment.music_dir, sr);
  if (!cfg.augment.babble_dir.empty()) res.babble = LoadPool(cfg.augment.babble_dir, sr);
  if (!cfg.augment.rir_dir.empty()) res.rirs = LoadPool(cfg.augment.rir_dir, sr);
  res.codec.encoder_dir = cfg.augment.codec_dir;
  res.codec.force_surrogate = cfg.augment.force_surrogate_codec;
  res.vad = cfg.eval.vad;
  return res;
}

std::vector<advpost::ManifestEntry> WriteToySet(const fs::path& dir, const std::string& name,
                                                const advpost::ToyCorpusConfig& toy,
                                                uint64_t seed) {
  const auto set = advpost::MakeToySet(toy, seed);
  std::vector<advpost::ManifestEntry> entries;
  auto emit = [&](const std::vector<advpost::Waveform>& clips, advpost::Label label,
                  const char* tag) {
    for (std::size_t i = 0; i < clips.size(); ++i) {
      const std::string rel = "toy/" + name + "/" + tag + "_" + std::to_string(i) + ".wav";
      advpost::WriteWav(clips[i], dir / rel);
      advpost::ManifestEntry e;
      e.path = rel;
      e.label = label;
      e.speaker = label == advpost::Label::kTargetNatural ? "toy_target" : "toy_other";
      entries.push_back(std::move(e));
    }
  };
  emit(set.genuine, advpost::Label::kTargetNatural, "genuine");
  emit(set.fake, advpost::Label::kFake, "fake");
  return entries;
}

// prepare --------------------------------------------------------------------

struct PrepareOptions {
  CommonOptions common;
  std::string manifest;
  bool toy = false;
  bool no_augment = false;
};

int RunPrepare(const PrepareOptions& o) {
  const auto cfg = ResolveConfig(o.common);
  const fs::path out(o.common.out);
  fs::path manifest_path;
  std::vector<advpost::ManifestEntry> input;
  if (o.toy) {
    input = WriteToySet(out, "train", cfg.toy, advpost::DeriveSeed(cfg.seed, "toy/train"));
    advpost::WriteManifest(out / "heldout.jsonl",
                           WriteToySet(out, "heldout", cfg.toy,
                                       advpost::DeriveSeed(cfg.seed, "toy/heldout")));
    advpost::WriteManifest(out / "eval.jsonl",
                           WriteToySet(out, "eval", cfg.toy, advpost::DeriveSeed(cfg.seed, "toy/eval")));
    manifest_path = out / "manifest.jsonl";
  } else {
    manifest_path = Pick(o.manifest, cfg.io.manifest, "input manifest (--manifest or io.manifest)");
    input = advpost::ReadManifest(manifest_path);
    // Rewrite paths so the output manifest resolves from its own directory.
    for (auto& e : input) e.path = fs::absolute(advpost::ResolveEntryPath(manifest_path, e)).string();
  }

  std::vector<advpost::ManifestEntry> output = input;
  if (!o.no_augment && cfg.augment.copies_per_negative > 0) {
    const auto resources = BuildResources(cfg);
    const uint64_t base = advpost::DeriveSeed(cfg.seed, "augment");
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < input.size(); ++i) {
      if (input[i].label != advpost::Label::kTargetNatural || cfg.augment.augment_positives) {
        targets.push_back(i);
      }
    }
    const auto copies = static_cast<std::size_t>(cfg.augment.copies_per_negative);
    std::vector<advpost::ManifestEntry> augmented(targets.size() * copies);
    ParallelFor(augmented.size(), o.common.jobs, [&](std::size_t job) {
      const auto& src = input[targets[job / copies]];
      const fs::path src_path = o.toy ? out / src.path : fs::path(src.path);
      const auto w = advpost::ReadWavAt(src_path, cfg.lfcc.sample_rate);
      const uint64_t seed = advpost::DeriveSeed(base, uint64_t(targets[job / copies] * copies + job % copies));
      const auto r = advpost::AugmentRandom(w, cfg.augment.menu, seed, resources);
      const std::string rel = "augmented/" + fs::path(src.path).stem().string() + "_" +
                              std::to_string(targets[job / copies]) + "_" +
                              std::to_string(job % copies) + ".wav";
      advpost::WriteWav(r.output, out / rel);
      advpost::ManifestEntry e = src;
      e.path = rel;
      e.augmentation = std::string(advpost::AugmentKindName(r.chosen.kind));
      e.params = r.params;
      e.seed = seed;
      e.extra["source"] = src.path;
      augmented[job] = std::move(e);
    });
    output.insert(output.end(), augmented.begin(), augmented.end());
  }
  advpost::WriteManifest(out / "manifest.jsonl", output);
  std::cout << json{{"manifest", (out / "manifest.jsonl").string()},
                    {"entries", output.size()},
                    {"augmented", output.size() - input.size()}}
                   .dump()
            << std::endl;
  return kOk;
}

// train-detector -------------------------------------------------------------

struct TrainDetectorOptions {
  CommonOptions common;
  std::string manifest;
  std::string name = "detector";
};

int RunTrainDetector(const TrainDetectorOptions& o) {
  auto cfg = ResolveConfig(o.common);
  const fs::path manifest = Pick(o.manifest, cfg.io.manifest, "training manifest (--manifest or io.manifest)");
  const auto entries = advpost::ReadManifest(manifest);
  std::vector<advpost::Waveform> pos, neg;
  for (const auto& e : entries) {
    auto w = advpost::ReadWavAt(advpost::ResolveEntryPath(manifest, e), cfg.lfcc.sample_rate);
    (e.label == advpost::Label::kTargetNatural ? pos : neg).push_back(std::move(w));
  }
  auto train = cfg.detector.train;
  train.seed = advpost::DeriveSeed(cfg.seed, "train-detector/" + o.name);
  const fs::path out(o.common.out);
  std::ofstream log(out / (o.name + "_log.jsonl"));
  auto result = advpost::TrainDetector(
      pos, neg, cfg.detector.arch, cfg.lfcc, train, [&](const advpost::DetectorEpochLog& e) {
        log << json{{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss},
                    {"val_eer", e.val_eer}}
                   .dump()
            << '\n';
        log.flush();
      });
  const fs::path ckpt = out / (o.name + ".ckpt");
  result.model.Save(ckpt);
  std::cout << json{{"checkpoint", ckpt.string()},
                    {"sha256", advpost::Sha256File(ckpt)},
                    {"best_epoch", result.best_epoch},
                    {"best_val_eer", result.best_val_eer}}
                   .dump()
            << std::endl;
  return kOk;
}

// train-rgn ------------------------------------------------------------------

struct TrainRgnOptions {
  CommonOptions common;
  std::string manifest;
  std::string detector;
  std::string resume;
  int64_t max_steps = 0;
};

int RunTrainRgn(const TrainRgnOptions& o) {
  auto cfg = ResolveConfig(o.common);
  const fs::path det_path =
      Pick(o.detector, cfg.io.detector_checkpoint, "detector checkpoint (--detector or io.detector_checkpoint)");
  RequireFile(det_path, "detector checkpoint");
  const fs::path manifest = Pick(o.manifest, cfg.io.manifest, "training manifest (--manifest or io.manifest)");
  if (!o.resume.empty()) RequireFile(o.resume, "resume checkpoint");

  const std::string hash_before = advpost::Sha256File(det_path);
  auto detector = advpost::DetectorModel::Load(det_path);
  if (detector.lfcc() != cfg.lfcc) {
    Fail(ErrorCode::kInvalidConfig, "lfcc section differs from the detector checkpoint's front-end");
  }
  std::vector<advpost::Waveform> corpus;
  for (const auto& e : advpost::ReadManifest(manifest)) {
    if (e.label != advpost::Label::kFake) continue;
    corpus.push_back(advpost::ReadWavAt(advpost::ResolveEntryPath(manifest, e), cfg.lfcc.sample_rate));
  }
  if (corpus.empty()) Fail(ErrorCode::kEmptyInput, "manifest has no fake clips to train on");

  auto schedule = cfg.train;
  schedule.seed = advpost::DeriveSeed(cfg.seed, "train-rgn");
  torch::manual_seed(advpost::DeriveSeed(cfg.seed, "rgn-init"));
  advpost::ResidualGenerator generator(cfg.rgn);

  const fs::path out(o.common.out);
  std::ofstream log(out / "train_log.jsonl", o.resume.empty() ? std::ios::trunc : std::ios::app);
  advpost::RgnTrainOptions options;
  options.resume_from = o.resume;
  options.checkpoint_path = out / "generator.ckpt";
  options.max_steps = o.max_steps;
  options.on_step = [&](const advpost::RgnStepLog& s) {
    log << advpost::ToJson(s).dump() << '\n';
  };
  const auto result = advpost::TrainRgn(generator, detector, corpus, schedule, options);
  log.flush();
  const std::string hash_after = advpost::Sha256File(det_path);
  const json frozen{{"detector", det_path.string()},
                    {"sha256_before", hash_before},
                    {"sha256_after", hash_after},
                    {"unchanged", hash_before == hash_after}};
  std::ofstream(out / "frozen_detector.json") << frozen.dump(2) << '\n';
  if (hash_before != hash_after) Fail(ErrorCode::kInternal, "detector checkpoint changed during training");
  std::cout << json{{"checkpoint", options.checkpoint_path.string()},
                    {"final_step", result.final_step},
                    {"detector_unchanged", true}}
                   .dump()
            << std::endl;
  return kOk;
}

// apply ----------------------------------------------------------------------

struct ApplyOptions {
  CommonOptions common;
  std::string manifest;
  std::string generator;
  bool all_labels = false;
};

int RunApply(const ApplyOptions& o) {
  auto cfg = ResolveConfig(o.common);
  const fs::path gen_path = Pick(o.generator, cfg.io.generator_checkpoint,
                                 "generator checkpoint (--generator or io.generator_checkpoint)");
  RequireFile(gen_path, "generator checkpoint");
  const fs::path manifest =
      Pick(o.manifest, cfg.io.eval_manifest, "input manifest (--manifest or io.eval_manifest)");
  auto generator = advpost::LoadGenerator(gen_path);
  const auto entries = advpost::ReadManifest(manifest);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (o.all_labels || entries[i].label == advpost::Label::kFake) todo.push_back(i);
  }
  const fs::path out(o.common.out);
  std::vector<advpost::ManifestEntry> processed(todo.size());
  ParallelFor(todo.size(), o.common.jobs, [&](std::size_t k) {
    const auto& e = entries[todo[k]];
    const auto src = advpost::ResolveEntryPath(manifest, e);
    const auto w = advpost::ReadWavAt(src, cfg.lfcc.sample_rate);
    const auto after = advpost::ApplyGenerator(generator, w);
    const std::string rel = "processed/" + std::to_string(todo[k]) + "_" + src.stem().string() + ".wav";
    advpost::WriteWav(after, out / rel);
    advpost::ManifestEntry p = e;
    p.path = rel;
    p.extra["source"] = fs::absolute(src).string();
    processed[k] = std::move(p);
  });
  advpost::WriteManifest(out / "processed.jsonl", processed);
  std::cout << json{{"manifest", (out / "processed.jsonl").string()}, {"processed", processed.size()}}.dump()
            << std::endl;
  return kOk;
}

// eval -----------------------------------------------------------------------

struct EvalOptions {
  CommonOptions common;
  std::vector<std::string> detectors;
  std::string manifest;
  std::string processed;
  std::string generator;
};

int RunEval(const EvalOptions& o) {
  auto cfg = ResolveConfig(o.common);
  const auto det_paths = o.detectors.empty() ? cfg.io.eval_detectors : o.detectors;
  if (det_paths.empty()) {
    Fail(ErrorCode::kMissingArtifact,
         "no detector checkpoint given (--detectors or io.eval_detectors)");
  }
  for (const auto& p : det_paths) RequireFile(p, "detector checkpoint");
  const fs::path manifest =
      Pick(o.manifest, cfg.io.eval_manifest, "evaluation manifest (--manifest or io.eval_manifest)");
  const fs::path processed = Pick(o.processed, cfg.io.processed_manifest,
                                  "processed manifest (--processed or io.processed_manifest)");
  RequireFile(manifest, "evaluation manifest");
  RequireFile(processed, "processed manifest");
  if (!o.generator.empty()) RequireFile(o.generator, "generator checkpoint");

  std::vector<advpost::DetectorModel> models;
  std::vector<advpost::Scorer> scorers;
  for (const auto& p : det_paths) models.push_back(advpost::DetectorModel::Load(p));
  for (std::size_t i = 0; i < models.size(); ++i) {
    scorers.push_back(advpost::MakeScorer(fs::path(det_paths[i]).stem().string(), models[i]));
  }

  std::vector<advpost::EvalClip> genuines, fakes_before, fakes_after;
  std::map<std::string, std::size_t> before_index;
  for (const auto& e : advpost::ReadManifest(manifest)) {
    const auto path = advpost::ResolveEntryPath(manifest, e);
    auto w = advpost::ReadWavAt(path, cfg.lfcc.sample_rate);
    if (e.label == advpost::Label::kTargetNatural) {
      genuines.push_back({e.path, std::move(w)});
    } else if (e.label == advpost::Label::kFake) {
      before_index[fs::absolute(path).string()] = fakes_before.size();
      fakes_before.push_back({e.path, std::move(w)});
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (before, after)
  for (const auto& e : advpost::ReadManifest(processed)) {
    if (e.label != advpost::Label::kFake) continue;
    auto w = advpost::ReadWavAt(advpost::ResolveEntryPath(processed, e), cfg.lfcc.sample_rate);
    if (e.extra.contains("source")) {
      auto it = before_index.find(e.extra["source"].get<std::string>());
      if (it != before_index.end()) pairs.emplace_back(it->second, fakes_after.size());
    }
    fakes_after.push_back({e.path, std::move(w)});
  }

  advpost::EvalReport report;
  report.eer = advpost::EerDelta(scorers.front(), genuines, fakes_before, fakes_after);
  report.dsr = advpost::ComputeDsr(scorers, fakes_after, genuines);
  json per_detector = json::array();
  for (const auto& s : scorers) {
    const auto d = advpost::EerDelta(s, genuines, fakes_before, fakes_after);
    per_detector.push_back({{"name", s.name}, {"eer_before", d.before.eer}, {"eer_after", d.after.eer}});
  }
  report.metadata["eer_per_detector"] = per_detector;
  report.metadata["eer_detector"] = scorers.front().name;

  std::optional<advpost::ResidualGenerator> generator;
  if (!o.generator.empty()) generator = advpost::LoadGenerator(o.generator);
  double speech_sum = 0, silence_sum = 0;
  int speech_n = 0, silence_n = 0, both = 0, below = 0;
  const fs::path spec_dir = fs::path(o.common.out) / "spectrograms";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& before = fakes_before[pairs[k].first].audio;
    const auto& after = fakes_after[pairs[k].second].audio;
    if (before.size() != after.size()) continue;
    advpost::Waveform residual;
    if (generator) {
      residual = advpost::GenerateResidual(*generator, before);
    } else {
      residual = after;
      for (std::size_t i = 0; i < residual.size(); ++i) residual.samples[i] -= before.samples[i];
    }
    const auto split = advpost::SilenceSpeechMt(before, residual, cfg.eval.vad);
    if (split.mean_speech) {
      speech_sum += *split.mean_speech;
      ++speech_n;
    }
    if (split.mean_silence) {
      silence_sum += *split.mean_silence;
      ++silence_n;
    }
    if (split.mean_speech && split.mean_silence) {
      ++both;
      below += *split.mean_silence < *split.mean_speech ? 1 : 0;
    }
    if (static_cast<int>(k) < cfg.eval.spectrogram_examples) {
      advpost::SpectrogramDiff(before, after, spec_dir / ("pair_" + std::to_string(k)),
                               cfg.eval.spectrogram);
    }
  }
  if (speech_n > 0) report.mean_Mt_speech = speech_sum / speech_n;
  if (silence_n > 0) report.mean_Mt_silence = silence_sum / silence_n;
  if (both > 0) report.silence_below_speech_fraction = static_cast<double>(below) / both;
  report.metadata["paired_clips"] = pairs.size();
  report.metadata["residual_source"] = generator ? "generator" : "file difference";

  const fs::path out(o.common.out);
  const json j = advpost::ToJson(report);
  std::ofstream(out / "report.json") << j.dump(2) << '\n';
  std::ofstream(out / "scores.csv") << advpost::ScoreTableCsv(report.dsr->table);
  std::cout << json{{"report", (out / "report.json").string()},
                    {"eer_before", j["eer_before"]},
                    {"eer_after", j["eer_after"]},
                    {"dsr", j["dsr"]}}
                   .dump()
            << std::endl;
  return kOk;
}

// report ---------------------------------------------------------------------

struct ReportOptions {
  CommonOptions common;
  std::vector<std::string> reports;
};

std::string Fmt(const json& v, int precision = 4) {
  if (v.is_null()) return "n/a";
  if (v.is_number_float()) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(precision);
    s << v.get<double>();
    return s.str();
  }
  return v.dump();
}

int RunReport(const ReportOptions& o) {
  ResolveConfig(o.common);
  std::vector<std::string> inputs = o.reports;
  if (inputs.empty()) inputs.push_back((fs::path(o.common.out) / "report.json").string());
  std::ostringstream md;
  md << "| report | EER before | EER after | DSR | W | A | N | Mt speech | Mt silence | silence<speech |\n";
  md << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& path : inputs) {
    RequireFile(path, "evaluation report");
    std::ifstream f(path);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      Fail(ErrorCode::kInvalidArgument, path + ": " + e.what());
    }
    if (j.value("schema_version", 0) != advpost::kEvalReportSchemaVersion) {
      Fail(ErrorCode::kInvalidArgument, path + ": unsupported report schema_version");
    }
    md << "| " << path << " | " << Fmt(j["eer_before"]) << " | " << Fmt(j["eer_after"]) << " | "
       << Fmt(j["dsr"]) << " | " << Fmt(j.value("W", json())) << " | " << Fmt(j.value("A", json()))
       << " | " << Fmt(j.value("N", json())) << " | " << Fmt(j["mean_Mt_speech"], 6) << " | "
       << Fmt(j["mean_Mt_silence"], 6) << " | " << Fmt(j["silence_below_speech_fraction"], 3)
       << " |\n";
  }
  const fs::path out = fs::path(o.common.out) / "report.md";
  std::ofstream(out) << md.str();
  std::cout << md.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"advpost: adversarial post-processing toolkit for anti-spoofing research"};
  app.require_subcommand(1);

  PrepareOptions prepare;
  auto* c_prepare = app.add_subcommand("prepare", "Build a training manifest with augmented negatives");
  AddCommon(c_prepare, prepare.common, "runs/prepare");
  c_prepare->add_option("--manifest", prepare.manifest, "Input manifest (JSON lines)");
  c_prepare->add_flag("--toy", prepare.toy, "Generate the synthetic demo corpus instead");
  c_prepare->add_flag("--no-augment", prepare.no_augment, "Skip augmentation");

  TrainDetectorOptions det;
  auto* c_det = app.add_subcommand("train-detector", "Train a detector on a manifest");
  AddCommon(c_det, det.common, "runs/detector");
  c_det->add_option("--manifest", det.manifest, "Training manifest");
  c_det->add_option("--name", det.name, "Checkpoint name; also selects the sub-seed")
      ->capture_default_str();

  TrainRgnOptions rgn;
  auto* c_rgn = app.add_subcommand("train-rgn", "Train the residual generator against a frozen detector");
  AddCommon(c_rgn, rgn.common, "runs/rgn");
  c_rgn->add_option("--manifest", rgn.manifest, "Manifest; its fake clips form the training corpus");
  c_rgn->add_option("--detector", rgn.detector, "Frozen detector checkpoint");
  c_rgn->add_option("--resume", rgn.resume, "Resume from a generator training checkpoint");
  c_rgn->add_option("--steps", rgn.max_steps, "Stop after this many steps (default: train.total_steps)");

  ApplyOptions apply;
  auto* c_apply = app.add_subcommand("apply", "Post-process clips with a trained generator");
  AddCommon(c_apply, apply.common, "runs/apply");
  c_apply->add_option("--manifest", apply.manifest, "Clips to process");
  c_apply->add_option("--generator", apply.generator, "Generator checkpoint");
  c_apply->add_flag("--all-labels", apply.all_labels, "Process every clip, not only fakes");

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "EER before/after, DSR, Mt split, spectrogram diffs");
  AddCommon(c_eval, eval.common, "runs/eval");
  c_eval->add_option("--detectors", eval.detectors, "Detector checkpoints to evaluate against");
  c_eval->add_option("--manifest", eval.manifest, "Genuine clips and unprocessed fakes");
  c_eval->add_option("--processed", eval.processed, "Manifest written by apply");
  c_eval->add_option("--generator", eval.generator, "Recompute residuals with this generator");

  ReportOptions report;
  auto* c_report = app.add_subcommand("report", "Summarise evaluation reports as a markdown table");
  AddCommon(c_report, report.common, "runs/eval");
  c_report->add_option("--reports", report.reports, "report.json files (default: <out>/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    PrintError("usage", kUsage, e.what());
    return kUsage;
  }

  try {
    if (c_prepare->parsed()) return RunPrepare(prepare);
    if (c_det->parsed()) return RunTrainDetector(det);
    if (c_rgn->parsed()) return RunTrainRgn(rgn);
    if (c_apply->parsed()) return RunApply(apply);
    if (c_eval->parsed()) return RunEval(eval);
    if (c_report->parsed()) return RunReport(report);
  } catch (const advpost::Error& e) {
    const int code = ExitCodeFor(e.code());
    PrintError(std::string(advpost::ErrorCodeName(e.code())), code, e.what());
    return code;
  } catch (const std::exception& e) {
    PrintError("internal", kInternalError, e.what());
    return kInternalError;
  }
  return kInternalError;
}
