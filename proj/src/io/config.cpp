// src/io/config.cpp

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

#include "advpost/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "advpost/error.hpp"

namespace advpost {
namespace {

std::string LineOf(const YAML::Node& node) {
  const auto mark = node.Mark();
  return mark.is_null() ? std::string() : ":" + std::to_string(mark.line + 1);
}

class Reader {
 public:
  Reader(YAML::Node node, std::string prefix, const std::string* source)
      : node_(std::move(node)), prefix_(std::move(prefix)), source_(source) {
    if (node_.IsNull()) return;
    if (!node_.IsMap()) {
      Fail(ErrorCode::kInvalidConfig,
           *source_ + LineOf(node_) + ": '" + Name("") + "' must be a mapping");
    }
  }

  template <class T>
  void operator()(const char* key, T& value) {
    seen_.insert(key);
    if (!node_.IsMap()) return;
    const YAML::Node child = node_[key];
    if (!child) return;
    try {
      value = child.as<T>();
    } catch (const YAML::Exception&) {
      Fail(ErrorCode::kInvalidConfig,
           *source_ + LineOf(child) + ": " + Name(key) + ": value has the wrong type");
    }
  }

  template <class F>
  void Section(const char* key, F&& visit) {
    seen_.insert(key);
    YAML::Node child = node_.IsMap() ? node_[key] : YAML::Node();
    Reader sub(child ? child : YAML::Node(), Name(key), source_);
    visit(sub);
    sub.Finish();
  }

  void Menu(const char* key, std::vector<AugmentSpec>& menu) {
    seen_.insert(key);
    if (!node_.IsMap()) return;
    const YAML::Node child = node_[key];
    if (!child) return;
    if (!child.IsSequence()) {
      Fail(ErrorCode::kInvalidConfig, *source_ + LineOf(child) + ": " + Name(key) + ": must be a list");
    }
    menu.clear();
    for (std::size_t i = 0; i < child.size(); ++i) {
      Reader item(child[i], Name(key) + "[" + std::to_string(i) + "]", source_);
      std::string kind;
      item("kind", kind);
      if (kind.empty()) {
        Fail(ErrorCode::kInvalidConfig, *source_ + LineOf(child[i]) + ": " + item.Name("kind") +
                                            ": required");
      }
      AugmentSpec spec;
      try {
        spec.kind = AugmentKindFromName(kind);
      } catch (const Error& e) {
        Fail(ErrorCode::kInvalidConfig, *source_ + LineOf(child[i]) + ": " + e.what());
      }
      item.Range("snr_db", spec.snr_db_min, spec.snr_db_max);
      item.Range("gain_db", spec.gain_db_min, spec.gain_db_max);
      item.Range("quality", spec.quality_min, spec.quality_max);
      item("downsample_rate", spec.downsample_rate);
      item.Finish();
      menu.push_back(spec);
    }
  }

  void Range(const char* key, double& lo, double& hi) {
    std::vector<double> r = {lo, hi};
    (*this)(key, r);
    if (r.size() != 2) {
      Fail(ErrorCode::kInvalidConfig, *source_ + LineOf(node_[key]) + ": " + Name(key) +
                                          ": expected [min, max]");
    }
    lo = r[0];
    hi = r[1];
  }

  void Finish() const {
    if (!node_.IsMap()) return;
    std::string unknown;
    std::string line;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (seen_.count(key)) continue;
      if (line.empty()) line = LineOf(kv.first);
      unknown += (unknown.empty() ? "" : ", ") + Name(key);
    }
    if (!unknown.empty()) {
      Fail(ErrorCode::kInvalidConfig, *source_ + line + ": unknown key(s): " + unknown);
    }
  }

  std::string Name(const std::string& key) const {
    if (prefix_.empty()) return key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  YAML::Node node_;
  std::string prefix_;
  const std::string* source_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(YAML::Emitter& out) : out_(out) {}

  template <class T>
  void operator()(const char* key, T& value) {
    out_ << YAML::Key << key << YAML::Value;
    if constexpr (requires { value.begin(); } && !std::is_same_v<T, std::string>) {
      out_ << YAML::Flow << YAML::BeginSeq;
      for (const auto& v : value) out_ << v;
      out_ << YAML::EndSeq;
    } else {
      out_ << value;
    }
  }

  template <class F>
  void Section(const char* key, F&& visit) {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
    visit(*this);
    out_ << YAML::EndMap;
  }

  void Menu(const char* key, std::vector<AugmentSpec>& menu) {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& s : menu) {
      out_ << YAML::Flow << YAML::BeginMap;
      out_ << YAML::Key << "kind" << YAML::Value << std::string(AugmentKindName(s.kind));
      Pair("snr_db", s.snr_db_min, s.snr_db_max);
      Pair("gain_db", s.gain_db_min, s.gain_db_max);
      Pair("quality", s.quality_min, s.quality_max);
      out_ << YAML::Key << "downsample_rate" << YAML::Value << s.downsample_rate;
      out_ << YAML::EndMap;
    }
    out_ << YAML::EndSeq;
  }

 private:
  void Pair(const char* key, double lo, double hi) {
    out_ << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << lo << hi
         << YAML::EndSeq;
  }
  YAML::Emitter& out_;
};

template <class V>
void VisitConfig(V& v, RunConfig& c) {
  v("schema_version", c.schema_version);
  v("seed", c.seed);
  v.Section("lfcc", [&](auto& s) {
    s("sample_rate", c.lfcc.sample_rate);
    s("win_ms", c.lfcc.win_ms);
    s("hop_ms", c.lfcc.hop_ms);
    s("n_fft", c.lfcc.n_fft);
    s("n_filters", c.lfcc.n_filters);
    s("n_coeff", c.lfcc.n_coeff);
    s("include_deltas", c.lfcc.include_deltas);
    s("delta_window", c.lfcc.delta_window);
    s("log_floor", c.lfcc.log_floor);
  });
  v.Section("augment", [&](auto& s) {
    s.Menu("menu", c.augment.menu);
    s("copies_per_negative", c.augment.copies_per_negative);
    s("augment_positives", c.augment.augment_positives);
    s("noise_dir", c.augment.noise_dir);
    s("music_dir", c.augment.music_dir);
    s("babble_dir", c.augment.babble_dir);
    s("rir_dir", c.augment.rir_dir);
    s("codec_dir", c.augment.codec_dir);
    s("force_surrogate_codec", c.augment.force_surrogate_codec);
  });
  v.Section("detector", [&](auto& s) {
    s("base_channels", c.detector.arch.base_channels);
    s("blocks_per_stage", c.detector.arch.blocks_per_stage);
    s("zero_init_head", c.detector.arch.zero_init_head);
    s("epochs", c.detector.train.epochs);
    s("batch_size", c.detector.train.batch_size);
    s("learning_rate", c.detector.train.learning_rate);
    s("crop_frames", c.detector.train.crop_frames);
    s("val_fraction", c.detector.train.val_fraction);
  });
  v.Section("rgn", [&](auto& s) {
    s("upsample_factors", c.rgn.upsample_factors);
    s("base_channels", c.rgn.base_channels);
    s("dilations", c.rgn.dilations);
    s("kernel_size", c.rgn.kernel_size);
    s("leaky_slope", c.rgn.leaky_slope);
    s("output_scale", c.rgn.output_scale);
    s("weight_norm", c.rgn.weight_norm);
    s("use_bias", c.rgn.use_bias);
  });
  v.Section("train", [&](auto& s) {
    s("learning_rates", c.train.learning_rates);
    s("decay_boundaries_steps", c.train.decay_boundaries);
    s("total_steps", c.train.total_steps);
    s("batch_size", c.train.batch_size);
    s("crop_seconds", c.train.crop_seconds);
    s("optimizer", c.train.optimizer);
    s("init_residual_ratio", c.train.init_residual_ratio);
    s("checkpoint_every", c.train.checkpoint_every);
    s("lambda_A", c.train.weights.lambda_A);
    s("lambda_R", c.train.weights.lambda_R);
    s("log_domain_adversarial", c.train.weights.log_domain_adversarial);
  });
  v.Section("eval", [&](auto& s) {
    s("vad_frame_ms", c.eval.vad.frame_ms);
    s("vad_threshold_db", c.eval.vad.threshold_db);
    s("spectrogram_n_fft", c.eval.spectrogram.n_fft);
    s("spectrogram_hop_ms", c.eval.spectrogram.hop_ms);
    s("spectrogram_floor_db", c.eval.spectrogram.floor_db);
    s("spectrogram_bands", c.eval.spectrogram.bands);
    s("spectrogram_examples", c.eval.spectrogram_examples);
  });
  v.Section("io", [&](auto& s) {
    s("manifest", c.io.manifest);
    s("detector_checkpoint", c.io.detector_checkpoint);
    s("generator_checkpoint", c.io.generator_checkpoint);
    s("eval_detectors", c.io.eval_detectors);
    s("eval_manifest", c.io.eval_manifest);
    s("processed_manifest", c.io.processed_manifest);
  });
  v.Section("toy", [&](auto& s) {
    s("clips_per_class", c.toy.clips_per_class);
    s("seconds", c.toy.seconds);
    s("sample_rate", c.toy.sample_rate);
    s("amp_min", c.toy.amp_min);
    s("amp_max", c.toy.amp_max);
    s("harmonic_max_hz", c.toy.harmonic_max_hz);
    s("breath_lo_hz", c.toy.breath_lo_hz);
    s("breath_hi_hz", c.toy.breath_hi_hz);
    s("breath_level", c.toy.breath_level);
    s("noise_floor", c.toy.noise_floor);
    s("lead_in_s", c.toy.lead_in_s);
    s("pause_min_s", c.toy.pause_min_s);
    s("pause_max_s", c.toy.pause_max_s);
  });
}

}  // namespace

void RunConfig::Validate() const {
  if (schema_version != kConfigSchemaVersion) {
    Fail(ErrorCode::kInvalidConfig, "schema_version " + std::to_string(schema_version) +
                                        " is not supported (expected " +
                                        std::to_string(kConfigSchemaVersion) + ")");
  }
  lfcc.Validate();
  if (augment.menu.empty()) Fail(ErrorCode::kInvalidConfig, "augment.menu must not be empty");
  for (const auto& s : augment.menu) s.Validate();
  if (augment.copies_per_negative < 0) {
    Fail(ErrorCode::kInvalidConfig, "augment.copies_per_negative must be >= 0");
  }
  detector.arch.Validate();
  detector.train.Validate();
  rgn.Validate();
  train.Validate();
  if (!(eval.vad.frame_ms > 0) || !(eval.vad.threshold_db >= 0)) {
    Fail(ErrorCode::kInvalidConfig, "eval: vad_frame_ms must be > 0 and vad_threshold_db >= 0");
  }
  if (eval.spectrogram.n_fft < 16 || !(eval.spectrogram.hop_ms > 0) ||
      !(eval.spectrogram.floor_db < 0) || eval.spectrogram.bands < 1) {
    Fail(ErrorCode::kInvalidConfig, "eval: invalid spectrogram settings");
  }
  if (eval.spectrogram_examples < 0) {
    Fail(ErrorCode::kInvalidConfig, "eval.spectrogram_examples must be >= 0");
  }
  toy.Validate();
}

RunConfig ParseConfig(const std::string& yaml_text, const std::string& source_name) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    Fail(ErrorCode::kConfigParse, source_name + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  Reader reader(root, "", &source_name);
  VisitConfig(reader, cfg);
  reader.Finish();
  try {
    cfg.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kInvalidConfig, source_name + ": " + e.what());
  }
  return cfg;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) Fail(ErrorCode::kUnreadableFile, "cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseConfig(ss.str(), path.string());
}

std::string DumpConfig(const RunConfig& cfg) {
  RunConfig copy = cfg;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  Writer writer(out);
  VisitConfig(writer, copy);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void SaveConfig(const RunConfig& cfg, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path);
  f << DumpConfig(cfg);
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write config " + path.string());
}

}  // namespace advpost
