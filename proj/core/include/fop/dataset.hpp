#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fop/image.hpp"

namespace fop {

/// One manifest line: `<mask.pbm> <obs.pgm> <name>`. Relative paths are
/// resolved against the manifest's directory.
struct ManifestEntry {
  std::filesystem::path mask;
  std::filesystem::path observation;
  std::string name;
};

struct Sample {
  BinaryImage mask;
  GrayImage observation;
  std::string name;
};

struct Dataset {
  std::filesystem::path manifest;
  std::vector<Sample> samples;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);
void write_manifest(const std::filesystem::path& manifest, const std::vector<ManifestEntry>& entries);

/// Loads every pair and checks that mask and observation sizes agree.
Dataset load_dataset(const std::filesystem::path& manifest);

}  // namespace fop
