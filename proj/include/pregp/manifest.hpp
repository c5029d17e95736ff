#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pregp {

/// Provenance record written next to every artifact. Contains no timestamps,
/// so identical invocations produce identical manifests.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> inputs;  ///< path -> blob hash
  std::vector<std::string> outputs;
  std::vector<std::string> tasks;  ///< tasks used for pre-training, when any
};

/// SHA-1 of "blob <size>\0<content>", hex encoded (matches `git hash-object`).
[[nodiscard]] std::string git_blob_hash(std::string_view content);
[[nodiscard]] std::string hash_file(const std::filesystem::path& path);

[[nodiscard]] std::string serialize_manifest(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace pregp
