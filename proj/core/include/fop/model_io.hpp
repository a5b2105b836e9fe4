#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "fop/model.hpp"

namespace fop {

/// Text model format:
///
///     fop-model v1
///     K <scales>
///     M <gray levels>
///     mode <invariant|raw>
///     lambda <float>        (training metadata)
///     step <int>            (checkpoints only)
///     V 0
///     <one float per line, 102 or 512 of them>
///     D 0
///     <M floats>
///     ...
///
/// Reading accepts any whitespace between tokens; writing is canonical with
/// shortest round-trip float formatting.
struct ModelFile {
  FopModel model;
  std::optional<std::int64_t> step;
};

void write_model(std::ostream& out, const FopModel& model, std::optional<std::int64_t> step = {});
void save_model(const std::filesystem::path& path, const FopModel& model,
                std::optional<std::int64_t> step = {});

/// When `expected_mode` is given, a file in the other mode is rejected.
ModelFile read_model(std::istream& in, std::optional<PatternMode> expected_mode = {});
ModelFile load_model_file(const std::filesystem::path& path,
                          std::optional<PatternMode> expected_mode = {});
FopModel load_model(const std::filesystem::path& path, std::optional<PatternMode> expected_mode = {});

/// FNV-1a 64-bit digest of the canonical serialization.
std::uint64_t model_hash(const FopModel& model);

}  // namespace fop
