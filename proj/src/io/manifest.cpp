// src/io/manifest.cpp

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

#include "advpost/io/manifest.hpp"

#include <fstream>

#include "advpost/error.hpp"

namespace advpost {
namespace {

constexpr std::pair<Label, std::string_view> kLabels[] = {
    {Label::kTargetNatural, "target_natural"},
    {Label::kOtherNatural, "other_natural"},
    {Label::kFake, "fake"},
};

}  // namespace

std::string_view LabelName(Label label) {
  for (const auto& [l, name] : kLabels) {
    if (l == label) return name;
  }
  Fail(ErrorCode::kInternal, "unnamed label");
}

Label LabelFromName(std::string_view name) {
  for (const auto& [l, n] : kLabels) {
    if (n == name) return l;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown label '" + std::string(name) + "' (expected target_natural, other_natural or fake)");
}

nlohmann::json ToJson(const ManifestEntry& e) {
  nlohmann::json j = e.extra.is_object() ? e.extra : nlohmann::json::object();
  j["path"] = e.path;
  j["label"] = LabelName(e.label);
  j["speaker"] = e.speaker;
  if (e.augmentation) {
    j["augmentation"] = *e.augmentation;
    j["params"] = e.params.is_null() ? nlohmann::json::object() : e.params;
  }
  if (e.seed) j["seed"] = *e.seed;
  return j;
}

ManifestEntry ManifestEntryFromJson(const nlohmann::json& j) {
  if (!j.is_object()) Fail(ErrorCode::kInvalidArgument, "manifest line is not a JSON object");
  ManifestEntry e;
  for (const auto& [key, value] : j.items()) {
    if (key == "path") {
      e.path = value.get<std::string>();
    } else if (key == "label") {
      e.label = LabelFromName(value.get<std::string>());
    } else if (key == "speaker") {
      e.speaker = value.is_null() ? std::string() : value.get<std::string>();
    } else if (key == "augmentation") {
      if (!value.is_null()) e.augmentation = value.get<std::string>();
    } else if (key == "params") {
      e.params = value;
    } else if (key == "seed") {
      if (!value.is_null()) e.seed = value.get<uint64_t>();
    } else {
      e.extra[key] = value;
    }
  }
  if (e.path.empty()) Fail(ErrorCode::kInvalidArgument, "manifest line has no 'path'");
  if (!j.contains("label")) Fail(ErrorCode::kInvalidArgument, "manifest line has no 'label'");
  return e;
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) Fail(ErrorCode::kMissingArtifact, "cannot open manifest " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      entries.push_back(ManifestEntryFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      Fail(e.code(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return entries;
}

void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path);
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write manifest " + path.string());
  for (const auto& e : entries) f << ToJson(e).dump() << '\n';
  if (!f) Fail(ErrorCode::kUnwritablePath, "cannot write manifest " + path.string());
}

std::filesystem::path ResolveEntryPath(const std::filesystem::path& manifest_path,
                                       const ManifestEntry& e) {
  const std::filesystem::path p(e.path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

}  // namespace advpost
