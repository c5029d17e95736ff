#include "pregp/manifest.hpp"

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "pregp/dataset_io.hpp"

namespace pregp {

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, content.data(), content.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    const unsigned char b = digest[i];
    hex += kHex[b >> 4];
    hex += kHex[b & 0xF];
  }
  return hex;
}

std::string hash_file(const std::filesystem::path& path) { return git_blob_hash(read_file(path.string())); }

std::string serialize_manifest(const RunManifest& m) {
  nlohmann::ordered_json doc;
  doc["command"] = m.command;
  doc["config"] = m.config;
  doc["seeds"] = m.seeds;
  doc["inputs"] = m.inputs;
  doc["outputs"] = m.outputs;
  if (!m.tasks.empty()) doc["tasks"] = m.tasks;
  return doc.dump(2) + "\n";
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  write_file(path.string(), serialize_manifest(manifest));
}

}  // namespace pregp
