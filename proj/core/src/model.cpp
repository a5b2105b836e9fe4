#include "fop/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fop/error.hpp"
#include "fop/incremental.hpp"

namespace fop {

void ModelLayout::validate() const {
  if (scales < 1) throw_invalid("model needs at least one scale");
  if (levels < 1) throw_invalid("model needs at least one gray level");
}

FopModel::FopModel(const ModelLayout& layout) : layout_(layout) {
  layout_.validate();
  weights_.assign(layout_.parameter_count(), 0.0);
}

FopModel::FopModel(const ModelLayout& layout, std::vector<double> weights)
    : layout_(layout), weights_(std::move(weights)) {
  layout_.validate();
  if (weights_.size() != layout_.parameter_count()) {
    throw_invalid("weight vector has " + std::to_string(weights_.size()) + " entries, layout needs " +
                  std::to_string(layout_.parameter_count()));
  }
}

namespace {

void check_scale(const ModelLayout& layout, int k) {
  if (k < 0 || k >= layout.scales) throw_invalid("scale index out of range");
}

}  // namespace

std::span<const double> FopModel::potentials(int k) const {
  check_scale(layout_, k);
  return weights().subspan(layout_.pattern_offset(k), static_cast<std::size_t>(layout_.pattern_count()));
}

std::span<double> FopModel::potentials(int k) {
  check_scale(layout_, k);
  return weights().subspan(layout_.pattern_offset(k), static_cast<std::size_t>(layout_.pattern_count()));
}

std::span<const double> FopModel::data_costs(int k) const {
  check_scale(layout_, k);
  return weights().subspan(layout_.data_offset(k), static_cast<std::size_t>(layout_.levels));
}

std::span<double> FopModel::data_costs(int k) {
  check_scale(layout_, k);
  return weights().subspan(layout_.data_offset(k), static_cast<std::size_t>(layout_.levels));
}

FopModel FopModel::level0_slice() const { return resized(1); }

FopModel FopModel::resized(int scales) const {
  ModelLayout layout = layout_;
  layout.scales = scales;
  FopModel out(layout);
  const std::size_t kept = static_cast<std::size_t>(std::min(scales, layout_.scales)) *
                           static_cast<std::size_t>(layout_.block_size());
  std::copy_n(weights_.begin(), kept, out.weights_.begin());
  out.lambda_ = lambda_;
  return out;
}

FopModel FopModel::without_data_term() const {
  FopModel out = *this;
  for (int k = 0; k < scales(); ++k) {
    auto d = out.data_costs(k);
    std::fill(d.begin(), d.end(), 0.0);
  }
  return out;
}

bool FopModel::all_finite() const noexcept {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return std::isfinite(w); });
}

namespace {

void check_geometry(const ModelLayout& layout, const BinaryPyramid& px, const GrayPyramid* py) {
  if (px.scales() != layout.scales) {
    throw_invalid("pyramid has " + std::to_string(px.scales()) + " scales, model has " +
                  std::to_string(layout.scales));
  }
  if (py == nullptr) return;
  if (py->scales() < layout.scales) throw_invalid("observation pyramid has too few scales");
  for (int k = 0; k < layout.scales; ++k) {
    const auto& x = px.level(k);
    const auto& y = py->level(k);
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
      throw_invalid("hidden and observation pyramids differ in geometry at scale " + std::to_string(k));
    }
    if (y.levels() > layout.levels) {
      throw_invalid("observation has " + std::to_string(y.levels()) + " gray levels, model supports " +
                    std::to_string(layout.levels));
    }
  }
}

}  // namespace

FeatureVector features(const ModelLayout& layout, const BinaryPyramid& px, const GrayPyramid& py) {
  layout.validate();
  check_geometry(layout, px, &py);
  FeatureVector phi{layout, std::vector<std::int64_t>(layout.parameter_count(), 0)};
  for (int k = 0; k < layout.scales; ++k) {
    const auto& x = px.level(k);
    const auto& y = py.level(k);
    const std::size_t patterns = layout.pattern_offset(k);
    const std::size_t data = layout.data_offset(k);
    for (int i = 0; i < x.rows(); ++i) {
      for (int j = 0; j < x.cols(); ++j) {
        ++phi.counts[patterns + static_cast<std::size_t>(layout.pattern_index(pattern_at(x, i, j)))];
        if (x(i, j)) ++phi.counts[data + static_cast<std::size_t>(y(i, j))];
      }
    }
  }
  return phi;
}

double dot(std::span<const double> weights, const FeatureVector& phi) {
  if (weights.size() != phi.counts.size()) throw_invalid("weight and feature sizes differ");
  double sum = 0.0;
  for (std::size_t p = 0; p < weights.size(); ++p) {
    if (phi.counts[p] != 0) sum += weights[p] * static_cast<double>(phi.counts[p]);
  }
  return sum;
}

double energy_fop(const FopModel& model, const BinaryPyramid& px) {
  check_geometry(model.layout(), px, nullptr);
  double energy = 0.0;
  for (int k = 0; k < model.scales(); ++k) {
    const auto& x = px.level(k);
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) energy += model.pattern_cost(k, pattern_at(x, i, j));
  }
  return energy;
}

double energy_data(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py) {
  check_geometry(model.layout(), px, &py);
  double energy = 0.0;
  for (int k = 0; k < model.scales(); ++k) {
    const auto& x = px.level(k);
    const auto& y = py.level(k);
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        if (x(i, j)) energy += model.data_cost(k, y(i, j));
  }
  return energy;
}

double energy_total(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py) {
  return energy_fop(model, px) + energy_data(model, px, py);
}

double delta_energy(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py,
                    std::span<const Pixel> flips) {
  check_geometry(model.layout(), px, &py);
  const auto& x = px.level(0);
  for (const auto& f : flips) {
    if (!x.contains(f.row, f.col)) {
      throw_invalid("flip (" + std::to_string(f.row) + "," + std::to_string(f.col) + ") outside image");
    }
  }
  IncrementalPyramid work(px);
  DeltaEvaluator evaluator(px);
  return evaluator.apply(work, py, flips, CompiledModel(model));
}

}  // namespace fop
