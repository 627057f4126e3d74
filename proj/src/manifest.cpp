#include "sharedpurity/manifest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace sharedpurity {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read file for digest: " + path);
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("cannot initialize SHA-256 digest");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const std::streamsize got = in.gcount();
    if (got > 0 &&
        EVP_DigestUpdate(ctx.get(), buffer.data(),
                         static_cast<std::size_t>(got)) != 1) {
      throw std::runtime_error("cannot update SHA-256 digest");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("cannot finalize SHA-256 digest");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command_line"] = command_line;
  j["config"] = config;
  j["seed"] = seed;
  j["artifact_version"] = artifact_version;
  j["input_digests"] = input_digests;
  j["output_digests"] = output_digests;
  j["duration_seconds"] = duration_seconds;
  return j;
}

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
  const std::string path = out_dir + "/manifest.json";
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write manifest: " + path);
  }
  out << manifest.to_json().dump(2) << "\n";
}

}  // namespace sharedpurity
