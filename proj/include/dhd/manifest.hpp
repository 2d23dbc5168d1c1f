#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace dhd {

using ordered_json = nlohmann::ordered_json;

/// Tool version string baked in at build time.
const char* tool_version();

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

/// Everything needed to explain a report: the command, every resolved
/// setting and the digests of all inputs.
///
/// Only reproducible() is embedded in reports. The wall-clock timestamp and
/// thread count never influence results, so they live in run_record() and
/// are written to a separate file; reports stay byte-identical across runs.
struct RunManifest {
  std::string command;
  ordered_json config = ordered_json::object();
  std::vector<InputDigest> inputs;
  std::string timestamp;
  unsigned threads = 1;

  void add_input(std::string role, const std::filesystem::path& path);

  ordered_json reproducible() const;
  ordered_json run_record() const;
};

/// UTC time formatted as ISO 8601.
std::string utc_timestamp();

/// Dumps with 2-space indentation and a trailing newline.
void write_json(const ordered_json& j, const std::filesystem::path& path);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace dhd
