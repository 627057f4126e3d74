#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace sharedpurity {

// Round-trippable decimal rendering of a double (shortest form would also
// work, but a fixed %.17g keeps files byte-identical across platforms).
std::string format_double(double value);

// Hex-encoded SHA-256 of a file's bytes. Throws std::runtime_error when the
// file cannot be read.
std::string sha256_file(const std::string& path);

// Record of one tool invocation: enough to re-run the command and to check
// bit-exact reproduction of its outputs.
struct RunManifest {
  std::string command_line;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::string artifact_version = "1.0.0";
  std::map<std::string, std::string> input_digests;
  std::map<std::string, std::string> output_digests;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
};

// Serializes the manifest as <out_dir>/manifest.json.
void write_manifest(const RunManifest& manifest, const std::string& out_dir);

}  // namespace sharedpurity
