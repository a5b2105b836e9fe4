#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fop {

/// Hidden binary image x on an n x m grid, stored row-major, one byte per pixel.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int rows, int cols);
  BinaryImage(int rows, int cols, std::vector<std::uint8_t> bits);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool contains(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < rows_ && j < cols_; }

  std::uint8_t operator()(int i, int j) const noexcept {
    return bits_[static_cast<std::size_t>(i) * cols_ + j];
  }
  /// Zero outside the grid.
  std::uint8_t value_or_zero(int i, int j) const noexcept {
    return contains(i, j) ? (*this)(i, j) : std::uint8_t{0};
  }
  void set(int i, int j, bool on) noexcept {
    bits_[static_cast<std::size_t>(i) * cols_ + j] = on ? 1 : 0;
  }
  void flip(int i, int j) noexcept { bits_[static_cast<std::size_t>(i) * cols_ + j] ^= 1; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t count_on() const noexcept;

  BinaryImage transposed() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Gray-level image y with values in {0, ..., levels-1}.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int rows, int cols, int levels, int fill = 0);
  GrayImage(int rows, int cols, int levels, std::vector<int> pixels);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < rows_ && j < cols_; }

  int operator()(int i, int j) const noexcept {
    return pixels_[static_cast<std::size_t>(i) * cols_ + j];
  }
  void set(int i, int j, int v);

  std::span<const int> pixels() const noexcept { return pixels_; }

  GrayImage transposed() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int levels_ = 0;
  std::vector<int> pixels_;
};

/// 8-connected components of the on pixels. labels holds -1 for off pixels
/// and a component id in [0, count) otherwise, numbered in raster order.
struct ComponentLabels {
  std::vector<int> labels;
  int count = 0;
};

ComponentLabels label_components(const BinaryImage& img);

}  // namespace fop
