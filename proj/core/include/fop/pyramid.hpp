#pragma once

#include <cstddef>
#include <vector>

#include "fop/image.hpp"

namespace fop {

/// Halve resolution by OR-ing each 2x2 block. Odd trailing rows/columns form
/// blocks with fewer children; the output is ceil(n/2) x ceil(m/2).
BinaryImage coarsen_or(const BinaryImage& img);

/// Halve resolution by the floored mean of each (possibly partial) 2x2 block.
GrayImage coarsen_avg(const GrayImage& img);

/// Number of pixels along one axis at pyramid level k: ceil(n / 2^k).
constexpr int level_extent(int n, int k) noexcept { return (n + (1 << k) - 1) >> k; }

/// Largest usable scale count: levels are added until the grid reaches 1x1.
int max_scales(int rows, int cols) noexcept;

/// A stack of K successively coarsened images; level 0 is the source.
template <class Image>
class Pyramid {
 public:
  Pyramid() = default;
  explicit Pyramid(std::vector<Image> levels) : levels_(std::move(levels)) {}

  int scales() const noexcept { return static_cast<int>(levels_.size()); }
  const Image& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
  Image& level(int k) { return levels_.at(static_cast<std::size_t>(k)); }
  const std::vector<Image>& levels() const noexcept { return levels_; }

  friend bool operator==(const Pyramid&, const Pyramid&) = default;

 private:
  std::vector<Image> levels_;
};

using BinaryPyramid = Pyramid<BinaryImage>;
using GrayPyramid = Pyramid<GrayImage>;

/// Throws if scales < 1 or scales > max_scales(rows, cols).
BinaryPyramid build_pyramid(const BinaryImage& img, int scales);
GrayPyramid build_pyramid(const GrayImage& img, int scales);

}  // namespace fop
