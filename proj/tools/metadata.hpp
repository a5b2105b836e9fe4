#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fop::cli {

/// Provenance record written as metadata.json into each output directory.
struct RunMetadata {
  std::vector<std::string> command_line;
  std::string command;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> model_hash;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  double wall_seconds = 0.0;
  std::filesystem::path output_dir;  // where metadata.json goes; not serialized

  /// FNV-1a of the compact config dump.
  std::uint64_t config_digest() const;
  nlohmann::ordered_json to_json() const;
  void write(const std::filesystem::path& dir) const;
};

std::string hex64(std::uint64_t v);

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace fop::cli
