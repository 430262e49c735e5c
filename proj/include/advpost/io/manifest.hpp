// include/advpost/io/manifest.hpp

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

#ifndef ADVPOST_IO_MANIFEST_HPP_
#define ADVPOST_IO_MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace advpost {

enum class Label { kTargetNatural, kOtherNatural, kFake };

std::string_view LabelName(Label label);
Label LabelFromName(std::string_view name);

/// One JSON line: {path, label, speaker} plus, for augmented copies,
/// {augmentation, params, seed}. Unrecognised fields are kept in `extra`.
struct ManifestEntry {
  std::string path;
  Label label = Label::kFake;
  std::string speaker;
  std::optional<std::string> augmentation;
  nlohmann::json params;
  std::optional<uint64_t> seed;
  nlohmann::json extra = nlohmann::json::object();

  /// Display id: the path as written.
  const std::string& id() const { return path; }
};

nlohmann::json ToJson(const ManifestEntry& e);
ManifestEntry ManifestEntryFromJson(const nlohmann::json& j);

/// Reads JSON-lines; blank lines are skipped. Errors carry the line number.
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Resolves a manifest entry path against the manifest's directory.
std::filesystem::path ResolveEntryPath(const std::filesystem::path& manifest_path,
                                       const ManifestEntry& e);

}  // namespace advpost

#endif  // ADVPOST_IO_MANIFEST_HPP_
