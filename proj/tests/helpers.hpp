#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fop/image.hpp"
#include "fop/model.hpp"
#include "fop/random.hpp"

namespace test {

inline fop::BinaryImage random_binary(int rows, int cols, double density, fop::Rng& rng) {
  fop::BinaryImage x(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) x.set(i, j, rng.bernoulli(density));
  return x;
}

inline fop::GrayImage random_gray(int rows, int cols, int levels, fop::Rng& rng) {
  fop::GrayImage y(rows, cols, levels);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) y.set(i, j, static_cast<int>(rng.below(static_cast<std::uint64_t>(levels))));
  return y;
}

inline fop::FopModel random_model(const fop::ModelLayout& layout, double scale, fop::Rng& rng) {
  fop::FopModel m(layout);
  for (double& w : m.weights()) w = scale * (2.0 * rng.uniform() - 1.0);
  return m;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fop_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test
