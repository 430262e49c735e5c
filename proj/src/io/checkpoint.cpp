// src/io/checkpoint.cpp

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

#include "advpost/io/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "advpost/error.hpp"

namespace advpost {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'V', 'P', 'O', 'S', 'T', 'C'};

std::string DtypeName(torch::Dtype d) {
  switch (d) {
    case torch::kFloat32: return "f32";
    case torch::kFloat64: return "f64";
    case torch::kInt64: return "i64";
    default:
      Fail(ErrorCode::kBadCheckpoint,
           std::string("unsupported tensor dtype ") + c10::toString(d));
  }
}

torch::Dtype DtypeFromName(const std::string& name) {
  if (name == "f32") return torch::kFloat32;
  if (name == "f64") return torch::kFloat64;
  if (name == "i64") return torch::kInt64;
  Fail(ErrorCode::kBadCheckpoint, "unknown tensor dtype " + name);
}

template <typename T>
void PutLe(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<uint64_t>(v) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T GetLe(const std::string& in, std::size_t at) {
  uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  nlohmann::json header;
  header["kind"] = ckpt.kind;
  header["meta"] = ckpt.meta;
  std::string payload;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& [name, tensor] : ckpt.tensors) {
    auto t = tensor.detach().to(torch::kCPU).contiguous();
    const auto nbytes = static_cast<std::size_t>(t.numel()) * t.element_size();
    table.push_back({{"name", name},
                     {"dtype", DtypeName(t.scalar_type())},
                     {"shape", t.sizes().vec()},
                     {"offset", payload.size()},
                     {"nbytes", nbytes}});
    payload.append(static_cast<const char*>(t.data_ptr()), nbytes);
  }
  nlohmann::json blobs = nlohmann::json::array();
  for (const auto& [name, bytes] : ckpt.blobs) {
    blobs.push_back({{"name", name},
                     {"offset", payload.size()},
                     {"nbytes", bytes.size()}});
    payload += bytes;
  }
  header["tensors"] = table;
  header["blobs"] = blobs;
  const std::string head = header.dump();

  std::string out(kMagic, sizeof kMagic);
  PutLe<uint32_t>(out, kCheckpointFormatVersion);
  PutLe<uint64_t>(out, head.size());
  out += head;
  out += payload;

  // Write-then-rename so a crash never leaves a truncated checkpoint.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write " + tmp.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) Fail(ErrorCode::kUnwritablePath, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) Fail(ErrorCode::kUnwritablePath, "cannot rename into " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          const std::string& expected_kind) {
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kMissingArtifact, "missing checkpoint " + path.string());
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) Fail(ErrorCode::kUnreadableFile, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  auto bad = [&](const std::string& why) {
    Fail(ErrorCode::kBadCheckpoint, path.string() + ": " + why);
  };
  if (data.size() < 20 || std::memcmp(data.data(), kMagic, sizeof kMagic) != 0) {
    bad("not a checkpoint");
  }
  const auto version = GetLe<uint32_t>(data, 8);
  if (version > kCheckpointFormatVersion) {
    bad("format version " + std::to_string(version) + " is newer than " +
        std::to_string(kCheckpointFormatVersion));
  }
  const auto head_len = GetLe<uint64_t>(data, 12);
  if (20 + head_len > data.size()) bad("truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(data.substr(20, head_len));
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("corrupt header: ") + e.what());
  }
  const std::size_t base = 20 + head_len;

  Checkpoint ckpt;
  ckpt.kind = header.value("kind", "");
  if (!expected_kind.empty() && ckpt.kind != expected_kind) {
    bad("expected a " + expected_kind + " checkpoint, found '" + ckpt.kind + "'");
  }
  ckpt.meta = header.value("meta", nlohmann::json::object());
  for (const auto& e : header.at("tensors")) {
    const auto offset = e.at("offset").get<std::size_t>();
    const auto nbytes = e.at("nbytes").get<std::size_t>();
    if (base + offset + nbytes > data.size()) bad("truncated tensor payload");
    const auto shape = e.at("shape").get<std::vector<int64_t>>();
    auto t = torch::empty(shape, torch::TensorOptions().dtype(
                                     DtypeFromName(e.at("dtype"))));
    if (static_cast<std::size_t>(t.numel()) * t.element_size() != nbytes) {
      bad("tensor size mismatch for " + e.at("name").get<std::string>());
    }
    std::memcpy(t.data_ptr(), data.data() + base + offset, nbytes);
    ckpt.tensors.emplace_back(e.at("name").get<std::string>(), t);
  }
  for (const auto& e : header.at("blobs")) {
    const auto offset = e.at("offset").get<std::size_t>();
    const auto nbytes = e.at("nbytes").get<std::size_t>();
    if (base + offset + nbytes > data.size()) bad("truncated blob payload");
    ckpt.blobs[e.at("name").get<std::string>()] =
        data.substr(base + offset, nbytes);
  }
  return ckpt;
}

std::vector<std::pair<std::string, torch::Tensor>> ModuleState(
    const torch::nn::Module& module) {
  std::vector<std::pair<std::string, torch::Tensor>> out;
  for (const auto& p : module.named_parameters(/*recurse=*/true)) {
    out.emplace_back("param/" + p.key(), p.value());
  }
  for (const auto& b : module.named_buffers(/*recurse=*/true)) {
    out.emplace_back("buffer/" + b.key(), b.value());
  }
  return out;
}

void LoadModuleState(
    torch::nn::Module& module,
    const std::vector<std::pair<std::string, torch::Tensor>>& state) {
  std::map<std::string, torch::Tensor> by_name(state.begin(), state.end());
  torch::NoGradGuard no_grad;
  auto assign = [&](const std::string& key, torch::Tensor& dst) {
    auto it = by_name.find(key);
    if (it == by_name.end()) {
      Fail(ErrorCode::kBadCheckpoint, "checkpoint lacks tensor " + key);
    }
    if (it->second.sizes() != dst.sizes()) {
      Fail(ErrorCode::kBadCheckpoint, "shape mismatch for " + key);
    }
    dst.copy_(it->second);
    by_name.erase(it);
  };
  for (auto& p : module.named_parameters(true)) assign("param/" + p.key(), p.value());
  for (auto& b : module.named_buffers(true)) assign("buffer/" + b.key(), b.value());
  if (!by_name.empty()) {
    Fail(ErrorCode::kBadCheckpoint,
         "checkpoint has unexpected tensor " + by_name.begin()->first);
  }
}

std::string Sha256File(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) Fail(ErrorCode::kUnreadableFile, "cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (f) {
    f.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(f.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

}  // namespace advpost
