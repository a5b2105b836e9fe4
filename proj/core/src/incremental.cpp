#include "fop/incremental.hpp"

#include <algorithm>
#include <string>

#include "fop/error.hpp"

namespace fop {

CompiledModel::CompiledModel(const FopModel& model)
    : scales_(model.scales()), levels_(model.levels()) {
  patterns_.resize(static_cast<std::size_t>(scales_) * kPatternCount);
  data_.resize(static_cast<std::size_t>(scales_) * static_cast<std::size_t>(levels_));
  for (int k = 0; k < scales_; ++k) {
    for (int code = 0; code < kPatternCount; ++code) {
      patterns_[static_cast<std::size_t>(k) * kPatternCount + static_cast<std::size_t>(code)] =
          model.pattern_cost(k, static_cast<PatternCode>(code));
    }
    const auto d = model.data_costs(k);
    std::copy(d.begin(), d.end(), data_.begin() + static_cast<std::ptrdiff_t>(k) * levels_);
  }
}

IncrementalPyramid::IncrementalPyramid(BinaryPyramid pyramid) : pyramid_(std::move(pyramid)) {}

IncrementalPyramid::IncrementalPyramid(const BinaryImage& image, int scales)
    : pyramid_(build_pyramid(image, scales)) {}

void IncrementalPyramid::record(int level, int row, int col) {
  if (recording_) journal_.push_back({level, row, col});
}

void IncrementalPyramid::flip(int i, int j) {
  BinaryImage& base = pyramid_.level(0);
  record(0, i, j);
  base.flip(i, j);
  for (int k = 1; k < pyramid_.scales(); ++k) {
    const BinaryImage& child = pyramid_.level(k - 1);
    BinaryImage& parent = pyramid_.level(k);
    i >>= 1;
    j >>= 1;
    const bool on = child.value_or_zero(2 * i, 2 * j) | child.value_or_zero(2 * i + 1, 2 * j) |
                    child.value_or_zero(2 * i, 2 * j + 1) | child.value_or_zero(2 * i + 1, 2 * j + 1);
    if (on == static_cast<bool>(parent(i, j))) break;
    record(k, i, j);
    parent.set(i, j, on);
  }
}

void IncrementalPyramid::begin() {
  journal_.clear();
  recording_ = true;
}

void IncrementalPyramid::commit() {
  journal_.clear();
  recording_ = false;
}

void IncrementalPyramid::rollback() {
  // Every journaled change is a bit flip, so undoing in reverse order
  // restores each cell regardless of how often it changed.
  for (auto it = journal_.rbegin(); it != journal_.rend(); ++it) {
    pyramid_.level(it->level).flip(it->row, it->col);
  }
  journal_.clear();
  recording_ = false;
}

DeltaEvaluator::DeltaEvaluator(const BinaryPyramid& geometry) {
  for (const auto& level : geometry.levels()) {
    window_stamps_.emplace_back(level.size(), 0u);
    cell_stamps_.emplace_back(level.size(), 0u);
  }
}

bool DeltaEvaluator::mark(std::vector<std::uint32_t>& stamps, std::size_t index) {
  if (stamps[index] == generation_) return false;
  stamps[index] = generation_;
  return true;
}

void DeltaEvaluator::apply(IncrementalPyramid& pyramid, const GrayPyramid& py,
                           std::span<const Pixel> flips, std::span<const CompiledModel* const> models,
                           std::span<double> deltas) {
  const BinaryPyramid& px = pyramid.pyramid();
  const int scales = px.scales();
  if (static_cast<int>(window_stamps_.size()) != scales) throw_invalid("evaluator geometry mismatch");
  if (deltas.size() != models.size()) throw_invalid("one delta slot per model required");
  for (const auto* m : models) {
    if (m->scales() > scales) throw_invalid("model has more scales than the pyramid");
  }

  if (++generation_ == 0) {
    for (auto& s : window_stamps_) std::fill(s.begin(), s.end(), 0u);
    for (auto& s : cell_stamps_) std::fill(s.begin(), s.end(), 0u);
    generation_ = 1;
  }
  windows_.clear();
  cells_.clear();

  // Collect every cell a flip can reach and every window containing such a
  // cell, remembering their current values.
  for (const auto& f : flips) {
    for (int k = 0; k < scales; ++k) {
      const BinaryImage& level = px.level(k);
      const int ci = f.row >> k;
      const int cj = f.col >> k;
      const std::size_t cell_index = static_cast<std::size_t>(ci) * level.cols() + cj;
      // Shared cell at this scale implies shared cells at all coarser scales.
      if (!mark(cell_stamps_[k], cell_index)) break;
      cells_.push_back({k, ci, cj, level(ci, cj)});
      for (int wi = ci - 1; wi <= ci + 1; ++wi) {
        for (int wj = cj - 1; wj <= cj + 1; ++wj) {
          if (!level.contains(wi, wj)) continue;
          if (mark(window_stamps_[k], static_cast<std::size_t>(wi) * level.cols() + wj)) {
            windows_.push_back({k, wi, wj, pattern_at(level, wi, wj)});
          }
        }
      }
    }
  }

  for (const auto& f : flips) pyramid.flip(f.row, f.col);

  after_.resize(windows_.size());
  for (std::size_t w = 0; w < windows_.size(); ++w) {
    after_[w] = pattern_at(px.level(windows_[w].level), windows_[w].row, windows_[w].col);
  }

  for (std::size_t m = 0; m < models.size(); ++m) {
    const CompiledModel& model = *models[m];
    double delta = 0.0;
    for (std::size_t w = 0; w < windows_.size(); ++w) {
      const Cell& c = windows_[w];
      if (c.level >= model.scales() || after_[w] == c.before) continue;
      delta += model.pattern_cost(c.level, after_[w]) - model.pattern_cost(c.level, c.before);
    }
    for (const Cell& c : cells_) {
      if (c.level >= model.scales()) continue;
      const int now = px.level(c.level)(c.row, c.col);
      if (now == c.before) continue;
      const double cost = model.data_cost(c.level, py.level(c.level)(c.row, c.col));
      delta += now ? cost : -cost;
    }
    deltas[m] = delta;
  }
}

double DeltaEvaluator::apply(IncrementalPyramid& pyramid, const GrayPyramid& py,
                             std::span<const Pixel> flips, const CompiledModel& model) {
  const CompiledModel* models[] = {&model};
  double delta = 0.0;
  apply(pyramid, py, flips, models, std::span<double>(&delta, 1));
  return delta;
}

}  // namespace fop
