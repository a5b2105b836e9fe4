#include "fop/pyramid.hpp"

#include <algorithm>
#include <string>

#include "fop/error.hpp"

namespace fop {

BinaryImage coarsen_or(const BinaryImage& img) {
  const int rows = level_extent(img.rows(), 1);
  const int cols = level_extent(img.cols(), 1);
  BinaryImage out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const bool on = img.value_or_zero(2 * i, 2 * j) | img.value_or_zero(2 * i + 1, 2 * j) |
                      img.value_or_zero(2 * i, 2 * j + 1) | img.value_or_zero(2 * i + 1, 2 * j + 1);
      out.set(i, j, on);
    }
  }
  return out;
}

GrayImage coarsen_avg(const GrayImage& img) {
  const int rows = level_extent(img.rows(), 1);
  const int cols = level_extent(img.cols(), 1);
  std::vector<int> pixels(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      int sum = 0;
      int count = 0;
      for (int di = 0; di < 2; ++di) {
        for (int dj = 0; dj < 2; ++dj) {
          if (img.contains(2 * i + di, 2 * j + dj)) {
            sum += img(2 * i + di, 2 * j + dj);
            ++count;
          }
        }
      }
      pixels[static_cast<std::size_t>(i) * cols + j] = sum / count;
    }
  }
  return GrayImage(rows, cols, img.levels(), std::move(pixels));
}

int max_scales(int rows, int cols) noexcept {
  int scales = 1;
  int extent = std::max(rows, cols);
  while (extent > 1) {
    extent = (extent + 1) / 2;
    ++scales;
  }
  return scales;
}

namespace {

void check_scales(int rows, int cols, int scales) {
  if (scales < 1) throw_invalid("pyramid needs at least one scale");
  if (scales > max_scales(rows, cols)) {
    throw_invalid("pyramid with " + std::to_string(scales) + " scales is too deep for a " +
                  std::to_string(rows) + "x" + std::to_string(cols) + " image (max " +
                  std::to_string(max_scales(rows, cols)) + ")");
  }
}

template <class Image, class Coarsen>
Pyramid<Image> build(const Image& img, int scales, Coarsen coarsen) {
  check_scales(img.rows(), img.cols(), scales);
  std::vector<Image> levels;
  levels.reserve(static_cast<std::size_t>(scales));
  levels.push_back(img);
  for (int k = 1; k < scales; ++k) levels.push_back(coarsen(levels.back()));
  return Pyramid<Image>(std::move(levels));
}

}  // namespace

BinaryPyramid build_pyramid(const BinaryImage& img, int scales) {
  return build(img, scales, [](const BinaryImage& b) { return coarsen_or(b); });
}

GrayPyramid build_pyramid(const GrayImage& img, int scales) {
  return build(img, scales, [](const GrayImage& g) { return coarsen_avg(g); });
}

}  // namespace fop
