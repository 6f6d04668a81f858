#include "poolkit/manifest.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace poolkit {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("file_digest: cannot read " + path);
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

std::string to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "poolkit";
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  j["seed"] = m.seed;
  j["parameters"] = m.parameters;
  j["inputs"] = m.input_digests;
  j["outputs"] = m.output_digests;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.subcommand = j.at("subcommand").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [key, value] : j.at("parameters").items())
    m.parameters[key] = value.get<std::string>();
  for (const auto& [key, value] : j.at("inputs").items())
    m.input_digests[key] = value.get<std::string>();
  for (const auto& [key, value] : j.at("outputs").items())
    m.output_digests[key] = value.get<std::string>();
  return m;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_manifest: cannot write " + path);
  out << to_json(m);
}

}  // namespace poolkit
