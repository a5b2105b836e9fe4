#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fop/model.hpp"

namespace fop {

/// Dense lookup tables for fast energy differences: every scale's cost for
/// all 512 window codes, plus its data costs.
class CompiledModel {
 public:
  explicit CompiledModel(const FopModel& model);

  int scales() const noexcept { return scales_; }
  int levels() const noexcept { return levels_; }

  double pattern_cost(int k, PatternCode code) const noexcept {
    return patterns_[static_cast<std::size_t>(k) * kPatternCount + code];
  }
  std::span<const double> pattern_table(int k) const noexcept {
    return std::span<const double>(patterns_).subspan(static_cast<std::size_t>(k) * kPatternCount,
                                                      kPatternCount);
  }
  double data_cost(int k, int value) const noexcept {
    return data_[static_cast<std::size_t>(k) * static_cast<std::size_t>(levels_) +
                 static_cast<std::size_t>(value)];
  }

 private:
  int scales_ = 0;
  int levels_ = 0;
  std::vector<double> patterns_;
  std::vector<double> data_;
};

/// An OR pyramid that is kept consistent with its level-0 image under single
/// pixel flips. Changes made between begin() and rollback() can be undone
/// exactly from a journal of overwritten cells.
class IncrementalPyramid {
 public:
  IncrementalPyramid() = default;
  explicit IncrementalPyramid(BinaryPyramid pyramid);
  IncrementalPyramid(const BinaryImage& image, int scales);

  const BinaryPyramid& pyramid() const noexcept { return pyramid_; }
  const BinaryImage& image() const { return pyramid_.level(0); }
  int scales() const noexcept { return pyramid_.scales(); }

  void flip(int i, int j);

  void begin();
  void commit();
  void rollback();
  bool recording() const noexcept { return recording_; }

 private:
  struct Change {
    std::int32_t level;
    std::int32_t row;
    std::int32_t col;
  };

  void record(int level, int row, int col);

  BinaryPyramid pyramid_;
  std::vector<Change> journal_;
  bool recording_ = false;
};

/// Scratch state for computing energy differences of a flip set under one or
/// more models at once. Sized for one pyramid geometry; reusable across calls.
class DeltaEvaluator {
 public:
  DeltaEvaluator() = default;
  explicit DeltaEvaluator(const BinaryPyramid& geometry);

  /// Applies the flips to `pyramid` and writes E_after - E_before for each
  /// model into `deltas`. Models may have fewer scales than the pyramid; the
  /// extra scales are then ignored for that model.
  void apply(IncrementalPyramid& pyramid, const GrayPyramid& py, std::span<const Pixel> flips,
             std::span<const CompiledModel* const> models, std::span<double> deltas);

  /// Single-model convenience.
  double apply(IncrementalPyramid& pyramid, const GrayPyramid& py, std::span<const Pixel> flips,
               const CompiledModel& model);

 private:
  struct Cell {
    std::int32_t level;
    std::int32_t row;
    std::int32_t col;
    std::uint16_t before;  // window code, or the cell bit for data cells
  };

  bool mark(std::vector<std::uint32_t>& stamps, std::size_t index);

  std::vector<std::vector<std::uint32_t>> window_stamps_;
  std::vector<std::vector<std::uint32_t>> cell_stamps_;
  std::uint32_t generation_ = 0;
  std::vector<Cell> windows_;
  std::vector<Cell> cells_;
  std::vector<std::uint16_t> after_;
};

}  // namespace fop
