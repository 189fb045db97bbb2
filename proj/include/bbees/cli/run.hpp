#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "bbees/cli/config.hpp"

namespace bbees::cli {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct Artifact {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Collects the files of one run and writes manifest.json last.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }
  void add(const std::string& name, const std::string& content);
  const std::vector<Artifact>& artifacts() const noexcept { return items_; }
  /// manifest.json: {"command", "artifacts": [{"name", "sha256", "bytes"}, ...]}
  std::string write_manifest(const std::string& command) const;

 private:
  std::filesystem::path root_;
  std::vector<Artifact> items_;
};

/// --out, then [run] out, then $BBEES_OUTPUT_ROOT/<command>, then ./bbees-out/<command>.
std::filesystem::path resolve_output_root(const RunConfig& cfg, const std::string& command);

/// Config as stored next to the artifacts: the seed and the command's own
/// section. Worker count and output path are left out so that they cannot
/// change any hash.
std::string artifact_config(const RunConfig& cfg, const std::string& command);

struct RunResult {
  int exit_code = 0;  // 0 success, 1 a report row failed
  std::filesystem::path root;
  std::string manifest_sha256;
};

/// Validates the config, runs one subcommand and writes its artifacts.
/// Throws on configuration or runtime errors.
RunResult run(const std::string& command, const RunConfig& cfg, std::ostream& log);

/// {"error": {"kind": ..., "message": ...}} on one line.
std::string error_record(const std::string& kind, const std::string& message);

}  // namespace bbees::cli
