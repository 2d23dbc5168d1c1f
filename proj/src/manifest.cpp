#include "dhd/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "dhd/errors.hpp"

#ifndef DHD_VERSION
#define DHD_VERSION "0.0.0"
#endif

namespace dhd {

constexpr int kReportSchemaVersion = 1;

const char* tool_version() { return DHD_VERSION; }

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for hashing");

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1) {
      throw Error("sha256: update failed");
    }
  }
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("sha256: final failed");

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xf]);
  }
  return hex;
}

void RunManifest::add_input(std::string role, const std::filesystem::path& path) {
  inputs.push_back({std::move(role), path.string(), sha256_file(path)});
}

ordered_json RunManifest::reproducible() const {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["tool"] = "dhd";
  j["tool_version"] = tool_version();
  j["command"] = command;
  j["config"] = config;
  ordered_json in = ordered_json::array();
  for (const auto& d : inputs) in.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  j["inputs"] = std::move(in);
  return j;
}

ordered_json RunManifest::run_record() const {
  ordered_json j = reproducible();
  j["timestamp"] = timestamp;
  j["threads"] = threads;
  return j;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const ordered_json& j, const std::filesystem::path& path) {
  write_text(j.dump(2) + "\n", path);
}

void write_text(const std::string& text, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace dhd
