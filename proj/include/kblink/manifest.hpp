#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kblink {

inline constexpr const char* kToolVersion = "0.3.0";

/// Lowercase hex SHA-256 of a file's bytes. Throws IoError.
std::string sha256_file(const std::filesystem::path& path);

struct InputDigest {
  std::string role;  // "index", "corpus", "config"
  std::string path;
  std::string sha256;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

// Written next to every prediction file so a run can be reproduced and its
// inputs checked.
struct RunManifest {
  nlohmann::ordered_json config;
  std::vector<InputDigest> inputs;
  std::string tool_version = kToolVersion;
  std::vector<StageTiming> timings;

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::filesystem::path manifest_path_for(const std::filesystem::path& predictions_path);

}  // namespace kblink
