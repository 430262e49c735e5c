// src/augment/augment.cpp

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

#include "advpost/augment/augment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "advpost/dsp/resample.hpp"
#include "advpost/dsp/synth.hpp"
#include "advpost/dsp/wav_io.hpp"
#include "advpost/error.hpp"
#include "advpost/seeds.hpp"

namespace advpost {
namespace {

namespace fs = std::filesystem;

struct KindName {
  AugmentKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {AugmentKind::kNoise, "noise"},         {AugmentKind::kMusic, "music"},
    {AugmentKind::kBabble, "babble"},       {AugmentKind::kReverb, "reverb"},
    {AugmentKind::kVolume, "volume"},       {AugmentKind::kCodecMp3, "codec_mp3"},
    {AugmentKind::kCodecOgg, "codec_ogg"},  {AugmentKind::kCodecAac, "codec_aac"},
    {AugmentKind::kCodecOpus, "codec_opus"}, {AugmentKind::kDownsample, "downsample"},
};

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<float> LoopTo(const std::vector<float>& x, std::size_t n, std::size_t offset) {
  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[(offset + i) % x.size()];
  return out;
}

std::vector<double> LinearConvolveTruncated(const std::vector<float>& x,
                                            const std::vector<float>& h) {
  const std::size_t n = x.size();
  const std::size_t m = h.size();
  std::vector<double> y(n, 0.0);
  if (static_cast<double>(n) * static_cast<double>(m) <= 2e7) {
    for (std::size_t k = 0; k < m; ++k) {
      const double hk = h[k];
      if (hk == 0.0) continue;
      for (std::size_t i = k; i < n; ++i) y[i] += hk * x[i - k];
    }
    return y;
  }
  const auto full = static_cast<int64_t>(n + m - 1);
  auto xt = torch::from_blob(const_cast<float*>(x.data()), {static_cast<int64_t>(n)},
                             torch::kFloat32).to(torch::kFloat64);
  auto ht = torch::from_blob(const_cast<float*>(h.data()), {static_cast<int64_t>(m)},
                             torch::kFloat32).to(torch::kFloat64);
  auto yt = torch::fft::irfft(torch::fft::rfft(xt, full) * torch::fft::rfft(ht, full), full)
                .narrow(0, 0, static_cast<int64_t>(n))
                .contiguous();
  std::copy(yt.data_ptr<double>(), yt.data_ptr<double>() + n, y.begin());
  return y;
}

// Delay (in samples, >= 0) that best aligns `decoded` to `reference`.
int64_t EstimateDelay(const std::vector<float>& reference, const std::vector<float>& decoded,
                      int64_t max_lag) {
  const auto n = static_cast<int64_t>(std::max(reference.size(), decoded.size()));
  const int64_t full = n + max_lag;
  auto a = torch::from_blob(const_cast<float*>(reference.data()),
                            {static_cast<int64_t>(reference.size())}, torch::kFloat32)
               .to(torch::kFloat64);
  auto b = torch::from_blob(const_cast<float*>(decoded.data()),
                            {static_cast<int64_t>(decoded.size())}, torch::kFloat32)
               .to(torch::kFloat64);
  auto corr = torch::fft::irfft(torch::fft::rfft(b, full) * torch::fft::rfft(a, full).conj(), full);
  return corr.narrow(0, 0, max_lag + 1).argmax().item<int64_t>();
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

fs::path FindFfmpeg(const CodecOptions& options) {
  auto probe = [](const fs::path& dir) -> fs::path {
    if (dir.empty()) return {};
    const fs::path candidate = dir / "ffmpeg";
    return ::access(candidate.c_str(), X_OK) == 0 ? candidate : fs::path();
  };
  if (auto p = probe(options.encoder_dir); !p.empty()) return p;
  if (const char* env = std::getenv("ADVPOST_CODEC_DIR")) {
    if (auto p = probe(env); !p.empty()) return p;
  }
  if (const char* path = std::getenv("PATH")) {
    std::stringstream ss(path);
    std::string dir;
    while (std::getline(ss, dir, ':')) {
      if (auto p = probe(dir); !p.empty()) return p;
    }
  }
  return {};
}

struct EncoderSetting {
  std::string args;
  std::string extension;
};

EncoderSetting EncoderFor(AugmentKind kind, double q) {
  std::ostringstream args;
  switch (kind) {
    case AugmentKind::kCodecMp3:
      args << "-c:a libmp3lame -q:a " << std::lround(9.0 - 9.0 * q);
      return {args.str(), ".mp3"};
    case AugmentKind::kCodecOgg:
      args << "-c:a libvorbis -q:a " << (-1.0 + 11.0 * q);
      return {args.str(), ".ogg"};
    case AugmentKind::kCodecAac:
      args << "-c:a aac -b:a " << std::lround(32.0 + 224.0 * q) << "k";
      return {args.str(), ".m4a"};
    case AugmentKind::kCodecOpus:
      args << "-c:a libopus -b:a " << std::lround(6.0 + 122.0 * q) << "k";
      return {args.str(), ".opus"};
    default:
      Fail(ErrorCode::kInvalidArgument, "not a codec kind");
  }
}

// Returns false when the external round trip could not be completed.
bool ExternalRoundTrip(const fs::path& ffmpeg, const Waveform& w, AugmentKind kind,
                       double quality, Waveform& out) {
  static std::atomic<uint64_t> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("advpost-codec-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return false;
  const auto setting = EncoderFor(kind, quality);
  const fs::path in = dir / "in.wav";
  const fs::path enc = dir / ("enc" + setting.extension);
  const fs::path dec = dir / "dec.wav";
  bool ok = false;
  try {
    WriteWav(w, in);
    const std::string base = ShellQuote(ffmpeg.string()) + " -nostdin -y -loglevel error ";
    const std::string encode =
        base + "-i " + ShellQuote(in.string()) + " " + setting.args + " " + ShellQuote(enc.string());
    const std::string decode = base + "-i " + ShellQuote(enc.string()) + " -ac 1 -ar " +
                               std::to_string(w.sample_rate) + " -c:a pcm_s16le " +
                               ShellQuote(dec.string());
    if (std::system(encode.c_str()) == 0 && std::system(decode.c_str()) == 0) {
      out = ReadWav(dec);
      ok = true;
    }
  } catch (const Error&) {
    ok = false;
  }
  fs::remove_all(dir, ec);
  return ok;
}

void MatchLength(std::vector<float>& x, std::size_t n) { x.resize(n, 0.0f); }

}  // namespace

std::string_view AugmentKindName(AugmentKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  Fail(ErrorCode::kInternal, "unnamed augmentation kind");
}

AugmentKind AugmentKindFromName(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  Fail(ErrorCode::kInvalidConfig, "unknown augmentation kind '" + std::string(name) + "'");
}

bool IsCodecKind(AugmentKind kind) {
  return kind == AugmentKind::kCodecMp3 || kind == AugmentKind::kCodecOgg ||
         kind == AugmentKind::kCodecAac || kind == AugmentKind::kCodecOpus;
}

void AugmentSpec::Validate() const {
  auto bad = [this](const std::string& why) {
    Fail(ErrorCode::kInvalidConfig,
         "augment '" + std::string(AugmentKindName(kind)) + "': " + why);
  };
  if (!(snr_db_min <= snr_db_max)) bad("snr_db_min must be <= snr_db_max");
  if (!(gain_db_min <= gain_db_max)) bad("gain_db_min must be <= gain_db_max");
  if (!(0.0 <= quality_min && quality_min <= quality_max && quality_max <= 1.0)) {
    bad("quality range must satisfy 0 <= min <= max <= 1");
  }
  if (downsample_rate < 1000) bad("downsample_rate must be >= 1000");
}

nlohmann::json ToJson(const AugmentSpec& s) {
  nlohmann::json j{{"kind", AugmentKindName(s.kind)}};
  switch (s.kind) {
    case AugmentKind::kNoise:
    case AugmentKind::kMusic:
    case AugmentKind::kBabble:
      j["snr_db"] = {s.snr_db_min, s.snr_db_max};
      break;
    case AugmentKind::kVolume:
      j["gain_db"] = {s.gain_db_min, s.gain_db_max};
      break;
    case AugmentKind::kDownsample:
      j["downsample_rate"] = s.downsample_rate;
      break;
    case AugmentKind::kReverb:
      break;
    default:
      j["quality"] = {s.quality_min, s.quality_max};
  }
  return j;
}

AugmentSpec AugmentSpecFromJson(const nlohmann::json& j) {
  AugmentSpec s;
  s.kind = AugmentKindFromName(j.at("kind").get<std::string>());
  auto range = [&](const char* key, double& lo, double& hi) {
    if (!j.contains(key)) return;
    const auto& r = j.at(key);
    if (!r.is_array() || r.size() != 2) {
      Fail(ErrorCode::kInvalidConfig, std::string("augment: '") + key + "' must be [min, max]");
    }
    lo = r[0].get<double>();
    hi = r[1].get<double>();
  };
  range("snr_db", s.snr_db_min, s.snr_db_max);
  range("gain_db", s.gain_db_min, s.gain_db_max);
  range("quality", s.quality_min, s.quality_max);
  if (j.contains("downsample_rate")) s.downsample_rate = j.at("downsample_rate").get<int>();
  s.Validate();
  return s;
}

std::vector<AugmentSpec> DefaultAugmentMenu() {
  std::vector<AugmentSpec> menu;
  for (const auto& kn : kKindNames) {
    AugmentSpec s;
    s.kind = kn.kind;
    menu.push_back(s);
  }
  return menu;
}

AugmentResources AugmentResources::Synthetic(uint64_t seed, int sample_rate, int per_pool,
                                             double seconds) {
  AugmentResources r;
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  std::mt19937_64 rng(DeriveSeed(seed, "augment-synthetic"));
  for (int i = 0; i < per_pool; ++i) {
    r.noise.push_back(synth::WhiteNoise(n, sample_rate, rng));
    r.music.push_back(synth::ToneComplex(n, sample_rate, rng));
    r.babble.push_back(synth::Babble(n, sample_rate, rng));
    r.rirs.push_back(synth::ExponentialRir(sample_rate, rng, 0.2 + 0.1 * i));
  }
  return r;
}

Waveform MixAdditive(const Waveform& w, const Waveform& interferer, double snr_db,
                     const VadConfig& vad) {
  if (w.sample_rate != interferer.sample_rate) {
    Fail(ErrorCode::kInvalidArgument, "mix: sample rates differ");
  }
  if (!std::isfinite(snr_db)) Fail(ErrorCode::kInvalidArgument, "mix: snr_db must be finite");
  double ip = 0.0;
  for (float v : interferer.samples) ip += double(v) * v;
  if (interferer.empty() || ip == 0.0) {
    Fail(ErrorCode::kZeroPowerInterferer, "zero-power interferer");
  }
  Waveform out = w;
  if (w.empty()) return out;
  const auto noise = LoopTo(interferer.samples, w.size(), 0);
  const auto mask = VoicedMask(w, vad);
  double pw = 0.0, pn = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!mask[i]) continue;
    pw += double(w.samples[i]) * w.samples[i];
    pn += double(noise[i]) * noise[i];
    ++count;
  }
  if (count == 0 || pw == 0.0) return out;
  if (pn == 0.0) {
    // The interferer is silent exactly where w is voiced; fall back to the
    // whole-signal power so the gain stays finite.
    pn = 0.0;
    for (float v : noise) pn += double(v) * v;
    pn *= static_cast<double>(count) / static_cast<double>(w.size());
  }
  const double g = std::sqrt(pw / pn * std::pow(10.0, -snr_db / 10.0));
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.samples[i] = static_cast<float>(w.samples[i] + g * noise[i]);
  }
  ClipInPlace(out);
  return out;
}

Waveform ApplyReverb(const Waveform& w, const Waveform& rir) {
  if (rir.empty()) Fail(ErrorCode::kEmptyRir, "empty RIR");
  if (w.sample_rate != rir.sample_rate) {
    Fail(ErrorCode::kInvalidArgument, "reverb: sample rates differ");
  }
  const auto y = LinearConvolveTruncated(w.samples, rir.samples);
  double out_peak = 0.0;
  for (double v : y) out_peak = std::max(out_peak, std::abs(v));
  const double in_peak = PeakAbs(w);
  const double g = out_peak > 0.0 ? in_peak / out_peak : 1.0;
  Waveform out{std::vector<float>(w.size()), w.sample_rate};
  for (std::size_t i = 0; i < y.size(); ++i) out.samples[i] = static_cast<float>(y[i] * g);
  ClipInPlace(out);
  return out;
}

Waveform ApplyGain(const Waveform& w, double gain_db) {
  if (!std::isfinite(gain_db)) Fail(ErrorCode::kInvalidArgument, "gain_db must be finite");
  const double g = std::pow(10.0, gain_db / 20.0);
  Waveform out = w;
  for (float& v : out.samples) v = static_cast<float>(v * g);
  ClipInPlace(out);
  return out;
}

Waveform ApplyDownsample(const Waveform& w, int target_rate) {
  Waveform out = Resample(Resample(w, target_rate), w.sample_rate);
  MatchLength(out.samples, w.size());
  ClipInPlace(out);
  return out;
}

Waveform CodecSurrogate(const Waveform& w, double quality) {
  if (!(quality >= 0.0 && quality <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "codec quality must be in [0, 1]");
  }
  Waveform out = w;
  const double nyquist = 0.5 * w.sample_rate;
  const double cutoff_hz = 2000.0 + 6000.0 * quality;
  if (cutoff_hz < 0.999 * nyquist && !w.empty()) {
    out.samples = FilterZeroPhase(w.samples, DesignLowPass(cutoff_hz / w.sample_rate, 64));
  }
  const int bits = static_cast<int>(std::lround(4.0 + 12.0 * quality));
  const double levels = std::ldexp(1.0, bits - 1);
  for (float& v : out.samples) {
    v = static_cast<float>(std::round(std::clamp(double(v), -1.0, 1.0) * levels) / levels);
  }
  ClipInPlace(out);
  return out;
}

CodecResult ApplyCodecAtQuality(const Waveform& w, AugmentKind kind, double quality,
                                const CodecOptions& options) {
  if (!IsCodecKind(kind)) Fail(ErrorCode::kInvalidArgument, "not a codec kind");
  if (!(quality >= 0.0 && quality <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "codec quality must be in [0, 1]");
  }
  CodecResult r;
  r.quality = quality;
  if (!options.force_surrogate && !w.empty()) {
    if (const auto ffmpeg = FindFfmpeg(options); !ffmpeg.empty()) {
      Waveform decoded;
      if (ExternalRoundTrip(ffmpeg, w, kind, quality, decoded) && !decoded.empty()) {
        const int64_t delay = EstimateDelay(w.samples, decoded.samples, 4096);
        decoded.samples.erase(decoded.samples.begin(),
                              decoded.samples.begin() +
                                  std::min<int64_t>(delay, decoded.samples.size()));
        MatchLength(decoded.samples, w.size());
        decoded.sample_rate = w.sample_rate;
        ClipInPlace(decoded);
        r.output = std::move(decoded);
        r.backend = "ffmpeg";
        return r;
      }
    }
  }
  r.output = CodecSurrogate(w, quality);
  r.surrogate = true;
  r.backend = "surrogate";
  return r;
}

CodecResult ApplyCodec(const Waveform& w, const AugmentSpec& spec, uint64_t seed,
                       const CodecOptions& options) {
  spec.Validate();
  std::mt19937_64 rng(SplitMix64(seed));
  return ApplyCodecAtQuality(w, spec.kind, Uniform(rng, spec.quality_min, spec.quality_max),
                             options);
}

AugmentResult AugmentRandom(const Waveform& w, const std::vector<AugmentSpec>& menu,
                            uint64_t seed, const AugmentResources& resources) {
  if (menu.empty()) Fail(ErrorCode::kEmptyMenu, "augmentation menu is empty");
  for (const auto& s : menu) s.Validate();
  std::mt19937_64 rng(SplitMix64(seed));
  AugmentResult r;
  r.menu_index = std::uniform_int_distribution<std::size_t>(0, menu.size() - 1)(rng);
  r.chosen = menu[r.menu_index];
  const AugmentSpec& s = r.chosen;
  r.params = nlohmann::json::object();

  auto pick = [&](const std::vector<Waveform>& pool, const char* what) -> const Waveform& {
    if (pool.empty()) {
      Fail(ErrorCode::kInvalidArgument,
           std::string("augmentation needs a ") + what + " pool but none was provided");
    }
    const auto i = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
    r.params["source_index"] = i;
    return pool[i];
  };

  switch (s.kind) {
    case AugmentKind::kNoise:
    case AugmentKind::kMusic:
    case AugmentKind::kBabble: {
      const auto& pool = s.kind == AugmentKind::kNoise   ? resources.noise
                         : s.kind == AugmentKind::kMusic ? resources.music
                                                         : resources.babble;
      const Waveform& src = pick(pool, std::string(AugmentKindName(s.kind)).c_str());
      const double snr = Uniform(rng, s.snr_db_min, s.snr_db_max);
      const auto offset = src.empty() ? std::size_t{0}
                                      : std::uniform_int_distribution<std::size_t>(
                                            0, src.size() - 1)(rng);
      Waveform rotated{src.empty() ? src.samples : LoopTo(src.samples, src.size(), offset),
                       src.sample_rate};
      r.params["snr_db"] = snr;
      r.params["offset"] = offset;
      r.output = MixAdditive(w, rotated, snr, resources.vad);
      break;
    }
    case AugmentKind::kReverb:
      r.output = ApplyReverb(w, pick(resources.rirs, "rir"));
      break;
    case AugmentKind::kVolume: {
      const double gain = Uniform(rng, s.gain_db_min, s.gain_db_max);
      r.params["gain_db"] = gain;
      r.output = ApplyGain(w, gain);
      break;
    }
    case AugmentKind::kDownsample:
      r.params["downsample_rate"] = s.downsample_rate;
      r.output = ApplyDownsample(w, s.downsample_rate);
      break;
    default: {
      auto c = ApplyCodec(w, s, rng(), resources.codec);
      r.params["quality"] = c.quality;
      r.params["codec_surrogate"] = c.surrogate;
      r.params["backend"] = c.backend;
      r.output = std::move(c.output);
    }
  }
  return r;
}

}  // namespace advpost
