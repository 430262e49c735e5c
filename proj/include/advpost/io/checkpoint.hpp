// include/advpost/io/checkpoint.hpp

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

#ifndef ADVPOST_IO_CHECKPOINT_HPP_
#define ADVPOST_IO_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <torch/torch.h>

namespace advpost {

inline constexpr uint32_t kCheckpointFormatVersion = 1;

/// Single-file archive:
///
///   "ADVPOSTC"            8-byte magic
///   u32 format_version    little endian
///   u64 header_len
///   header                UTF-8 JSON: kind, meta, tensor/blob table
///   payload               raw tensor bytes and blobs, in table order
///
/// Writing the same content twice yields identical bytes, so a file hash
/// identifies the parameters.
struct Checkpoint {
  std::string kind;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, torch::Tensor>> tensors;
  std::map<std::string, std::string> blobs;
};

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Throws kMissingArtifact when the file is absent and kBadCheckpoint when
/// it is malformed, has another kind than `expected_kind` (if nonempty) or
/// a newer format version.
Checkpoint LoadCheckpoint(const std::filesystem::path& path,
                          const std::string& expected_kind = "");

/// Parameters followed by buffers, as (qualified name, tensor) pairs.
std::vector<std::pair<std::string, torch::Tensor>> ModuleState(
    const torch::nn::Module& module);

/// Copies tensors into a module's parameters and buffers by name.
/// Every name must match with identical shapes.
void LoadModuleState(
    torch::nn::Module& module,
    const std::vector<std::pair<std::string, torch::Tensor>>& state);

/// Lowercase hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace advpost

#endif  // ADVPOST_IO_CHECKPOINT_HPP_
