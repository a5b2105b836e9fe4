#include "fop/image.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "fop/error.hpp"

namespace fop {

namespace {

void check_shape(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw_invalid("image dimensions must be positive, got " + std::to_string(rows) + "x" +
                  std::to_string(cols));
  }
}

}  // namespace

BinaryImage::BinaryImage(int rows, int cols)
    : rows_(rows), cols_(cols), bits_() {
  check_shape(rows, cols);
  bits_.assign(static_cast<std::size_t>(rows) * cols, 0);
}

BinaryImage::BinaryImage(int rows, int cols, std::vector<std::uint8_t> bits)
    : rows_(rows), cols_(cols), bits_(std::move(bits)) {
  check_shape(rows, cols);
  if (bits_.size() != static_cast<std::size_t>(rows) * cols) {
    throw_invalid("binary image data size does not match its dimensions");
  }
  if (std::any_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw_invalid("binary image values must be 0 or 1");
  }
}

std::size_t BinaryImage::count_on() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryImage BinaryImage::transposed() const {
  BinaryImage out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

GrayImage::GrayImage(int rows, int cols, int levels, int fill)
    : rows_(rows), cols_(cols), levels_(levels) {
  check_shape(rows, cols);
  if (levels < 1) throw_invalid("gray image must have at least one level");
  if (fill < 0 || fill >= levels) throw_invalid("gray fill value out of range");
  pixels_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

GrayImage::GrayImage(int rows, int cols, int levels, std::vector<int> pixels)
    : rows_(rows), cols_(cols), levels_(levels), pixels_(std::move(pixels)) {
  check_shape(rows, cols);
  if (levels < 1) throw_invalid("gray image must have at least one level");
  if (pixels_.size() != static_cast<std::size_t>(rows) * cols) {
    throw_invalid("gray image data size does not match its dimensions");
  }
  if (std::any_of(pixels_.begin(), pixels_.end(), [levels](int v) { return v < 0 || v >= levels; })) {
    throw_invalid("gray image value outside [0, " + std::to_string(levels) + ")");
  }
}

void GrayImage::set(int i, int j, int v) {
  if (v < 0 || v >= levels_) throw_invalid("gray value outside image levels");
  pixels_[static_cast<std::size_t>(i) * cols_ + j] = v;
}

GrayImage GrayImage::transposed() const {
  GrayImage out(cols_, rows_, levels_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

ComponentLabels label_components(const BinaryImage& img) {
  ComponentLabels out;
  out.labels.assign(img.size(), -1);
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < img.rows(); ++i) {
    for (int j = 0; j < img.cols(); ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * img.cols() + j;
      if (!img(i, j) || out.labels[idx] >= 0) continue;
      const int id = out.count++;
      out.labels[idx] = id;
      stack.push_back({i, j});
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        for (int di = -1; di <= 1; ++di) {
          for (int dj = -1; dj <= 1; ++dj) {
            const int ni = ci + di;
            const int nj = cj + dj;
            if (!img.contains(ni, nj) || !img(ni, nj)) continue;
            const std::size_t nidx = static_cast<std::size_t>(ni) * img.cols() + nj;
            if (out.labels[nidx] >= 0) continue;
            out.labels[nidx] = id;
            stack.push_back({ni, nj});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace fop
