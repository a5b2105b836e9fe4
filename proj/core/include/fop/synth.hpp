#pragma once

#include <cstdint>
#include <vector>

#include "fop/image.hpp"

namespace fop {

/// Per-pixel Gaussian observation y(i,j) ~ N(mu_{x(i,j)}, sigma^2), rounded
/// to the nearest integer and clamped into {0, ..., levels-1}.
struct ObservationModel {
  double mu_off = 150.0;
  double mu_on = 100.0;
  double sigma = 40.0;
  int levels = 256;

  /// Contour-detection setting: mu0=150, mu1=100, sigma=40.
  static ObservationModel contour() { return {150.0, 100.0, 40.0, 256}; }
  /// Leaf-segmentation setting: mu0=150, mu1=100, sigma=100.
  static ObservationModel leaf() { return {150.0, 100.0, 100.0, 256}; }
};

GrayImage synth_observe(const BinaryImage& x, const ObservationModel& obs, std::uint64_t seed);

enum class ShapeKind {
  contours,  // thin closed outlines and open polylines, one pixel wide
  blobs,     // one smooth filled region per image
};

/// Image i is generated from the stream split_seed(seed, i).
std::vector<BinaryImage> synth_shapes(ShapeKind kind, int count, int rows, int cols, std::uint64_t seed);

}  // namespace fop
