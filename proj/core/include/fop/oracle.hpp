#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fop/model.hpp"

namespace fop {

inline constexpr int kOracleMaxPixels = 22;

/// Exhaustive reference results for p(x|y) on tiny grids.
struct OracleResult {
  double log_partition = 0.0;
  std::vector<double> marginals;          // p(x(i,j) = 1 | y), row-major
  std::vector<double> expected_features;  // E[phi(x, y)], empty unless requested
};

/// Image whose pixel p (row-major) is bit p of `index`.
BinaryImage image_from_index(int rows, int cols, std::uint64_t index);

/// Sums over all 2^(n*m) hidden images, building each pyramid from scratch
/// and evaluating the full energy. Rejects grids above kOracleMaxPixels.
OracleResult oracle_enumerate(const FopModel& model, const GrayImage& y, bool with_features = false);

/// Exact conditional over the configurations of `pixels` with every other
/// pixel fixed to its value in x. Entry c has bit t equal to pixels[t].
std::vector<double> oracle_conditional(const FopModel& model, const GrayImage& y, const BinaryImage& x,
                                       std::span<const Pixel> pixels);

/// Exact -log p(x|y).
double oracle_nll(const FopModel& model, const BinaryImage& x, const GrayImage& y);

}  // namespace fop
