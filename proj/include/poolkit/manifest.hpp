#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace poolkit {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a over a file's bytes; "fnv1a64:<hex>".
std::string file_digest(const std::string& path);

// Record of one CLI run: re-running the same subcommand with these
// parameters and seed reproduces the outputs byte-identically.
struct RunManifest {
  std::string subcommand;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text);
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace poolkit
