#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fop/pattern.hpp"
#include "fop/pyramid.hpp"

namespace fop {

enum class PatternMode : std::uint8_t {
  invariant,  // one cost per dihedral symmetry class (102 per scale)
  raw,        // one cost per window code (512 per scale)
};

inline constexpr int kDefaultGrayLevels = 256;

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Shape of the parameter vector w. Each scale k owns one contiguous block:
/// the pattern costs V^k followed by the M data costs D^k.
struct ModelLayout {
  int scales = 1;
  int levels = kDefaultGrayLevels;
  PatternMode mode = PatternMode::invariant;

  int pattern_count() const noexcept {
    return mode == PatternMode::invariant ? kSymmetryClassCount : kPatternCount;
  }
  int block_size() const noexcept { return pattern_count() + levels; }
  std::size_t parameter_count() const noexcept {
    return static_cast<std::size_t>(scales) * static_cast<std::size_t>(block_size());
  }
  std::size_t pattern_offset(int k) const noexcept {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(block_size());
  }
  std::size_t data_offset(int k) const noexcept {
    return pattern_offset(k) + static_cast<std::size_t>(pattern_count());
  }
  /// Index of a window code inside its scale's pattern block.
  int pattern_index(PatternCode code) const noexcept {
    return mode == PatternMode::invariant ? PatternCodec::instance().class_of(code) : code;
  }

  void validate() const;

  friend bool operator==(const ModelLayout&, const ModelLayout&) = default;
};

/// Multiscale Fields-of-Patterns parameters w = (V^0, D^0, ..., V^{K-1}, D^{K-1}).
/// Energies are in nats with p(x|y) proportional to exp(-E).
class FopModel {
 public:
  FopModel() = default;
  explicit FopModel(const ModelLayout& layout);
  FopModel(const ModelLayout& layout, std::vector<double> weights);

  const ModelLayout& layout() const noexcept { return layout_; }
  int scales() const noexcept { return layout_.scales; }
  int levels() const noexcept { return layout_.levels; }
  PatternMode mode() const noexcept { return layout_.mode; }

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<double> weights() noexcept { return weights_; }

  std::span<const double> potentials(int k) const;
  std::span<double> potentials(int k);
  std::span<const double> data_costs(int k) const;
  std::span<double> data_costs(int k);

  double pattern_cost(int k, PatternCode code) const noexcept {
    return weights_[layout_.pattern_offset(k) + static_cast<std::size_t>(layout_.pattern_index(code))];
  }
  double data_cost(int k, int value) const noexcept {
    return weights_[layout_.data_offset(k) + static_cast<std::size_t>(value)];
  }

  /// Regularization weight used in training; not part of the energy.
  double lambda() const noexcept { return lambda_; }
  void set_lambda(double lambda) noexcept { lambda_ = lambda; }

  /// Single-scale model made of V^0 and D^0.
  FopModel level0_slice() const;
  /// Copy with `scales` scales: existing blocks are kept, new ones are zero.
  FopModel resized(int scales) const;
  /// Copy with every data cost set to zero (prior-only energy).
  FopModel without_data_term() const;

  bool all_finite() const noexcept;

  friend bool operator==(const FopModel&, const FopModel&) = default;

 private:
  ModelLayout layout_;
  std::vector<double> weights_;
  double lambda_ = 0.0;
};

/// Log-linear sufficient statistics phi(x, y), laid out like FopModel weights.
struct FeatureVector {
  ModelLayout layout;
  std::vector<std::int64_t> counts;

  std::span<const std::int64_t> patterns(int k) const {
    return std::span<const std::int64_t>(counts).subspan(layout.pattern_offset(k),
                                                         static_cast<std::size_t>(layout.pattern_count()));
  }
  std::span<const std::int64_t> observations(int k) const {
    return std::span<const std::int64_t>(counts).subspan(layout.data_offset(k),
                                                         static_cast<std::size_t>(layout.levels));
  }
};

FeatureVector features(const ModelLayout& layout, const BinaryPyramid& px, const GrayPyramid& py);

double dot(std::span<const double> weights, const FeatureVector& phi);

/// Sum over scales and all (overlapping) 3x3 windows of V^k(window).
double energy_fop(const FopModel& model, const BinaryPyramid& px);
/// Sum over scales of D^k(y^k(i,j)) at every on pixel of x^k.
double energy_data(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py);
double energy_total(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py);

/// E(x') - E(x) where x' is x with the listed level-0 pixels flipped (a pixel
/// listed twice flips back). Only the pyramid cells and windows touched by the
/// flips are revisited.
double delta_energy(const FopModel& model, const BinaryPyramid& px, const GrayPyramid& py,
                    std::span<const Pixel> flips);

}  // namespace fop
