// src/dsp/wav_io.cpp

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

#include "advpost/dsp/wav_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "advpost/dsp/resample.hpp"
#include "advpost/error.hpp"

namespace advpost {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t Le16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t Le32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutLe16(std::vector<unsigned char>& out, uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutLe32(std::vector<unsigned char>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kUnreadableFile, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto unreadable = [&](const std::string& why) {
    Fail(ErrorCode::kUnreadableFile, path.string() + ": " + why);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    unreadable("not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    uint32_t len = Le32(hdr + 4);
    std::size_t body = pos + 8;
    std::size_t avail = bytes.size() - body;
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (len < 16 || avail < 16) unreadable("truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = Le16(f);
      channels = Le16(f + 2);
      rate = Le32(f + 4);
      bits = Le16(f + 14);
      if (format == kFormatExtensible && len >= 26 && avail >= 26) {
        format = Le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      // Streaming writers sometimes leave the length unset.
      data_len = std::min<std::size_t>(len, avail);
    }
    pos = body + len + (len & 1u);
  }
  if (!have_fmt) unreadable("missing fmt chunk");
  if (data == nullptr) unreadable("missing data chunk");
  if (channels != 1) {
    Fail(ErrorCode::kMultichannel, path.string() + ": multichannel input (" +
                                       std::to_string(channels) +
                                       " channels)");
  }
  if (rate == 0) unreadable("zero sample rate");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    std::size_t n = data_len / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto v = static_cast<int16_t>(Le16(data + 2 * i));
      w.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else if (format == kFormatFloat && bits == 32) {
    std::size_t n = data_len / 4;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      uint32_t raw = Le32(data + 4 * i);
      float v;
      std::memcpy(&v, &raw, sizeof v);
      w.samples[i] = v;
    }
  } else {
    Fail(ErrorCode::kUnsupportedEncoding,
         path.string() + ": unsupported encoding (format " +
             std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }
  return w;
}

void WriteWav(const Waveform& w, const std::filesystem::path& path) {
  if (w.sample_rate <= 0) {
    Fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  const auto n = static_cast<uint32_t>(w.samples.size());
  std::vector<unsigned char> out;
  out.reserve(44 + 2 * static_cast<std::size_t>(n));
  PutTag(out, "RIFF");
  PutLe32(out, 36 + 2 * n);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutLe32(out, 16);
  PutLe16(out, kFormatPcm);
  PutLe16(out, 1);
  PutLe32(out, static_cast<uint32_t>(w.sample_rate));
  PutLe32(out, static_cast<uint32_t>(w.sample_rate) * 2);
  PutLe16(out, 2);
  PutLe16(out, 16);
  PutTag(out, "data");
  PutLe32(out, 2 * n);
  for (float s : w.samples) {
    float c = std::isfinite(s) ? std::clamp(s, -1.0f, 1.0f) : 0.0f;
    long q = std::lround(static_cast<double>(c) * 32768.0);
    q = std::clamp<long>(q, -32768, 32767);
    PutLe16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }

  if (path.has_parent_path()) {
    std::error_code ec;  // a failure here shows up when opening the file
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) Fail(ErrorCode::kUnwritablePath, "short write to " + path.string());
}

Waveform ReadWavAt(const std::filesystem::path& path, int sample_rate) {
  Waveform w = ReadWav(path);
  if (w.sample_rate != sample_rate) w = Resample(w, sample_rate);
  return w;
}

}  // namespace advpost
