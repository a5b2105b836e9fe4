#pragma once

#include <array>
#include <cstdint>

#include "fop/image.hpp"

namespace fop {

inline constexpr int kPatternCount = 512;
inline constexpr int kSymmetryClassCount = 102;
inline constexpr int kDihedralCount = 8;

/// 3x3 window code. Bit 3*(dr+1) + (dc+1) holds x(i+dr, j+dc); the center is bit 4.
using PatternCode = std::uint16_t;

/// Window code centered at (i, j), with pixels outside the image read as 0.
PatternCode pattern_at(const BinaryImage& img, int i, int j) noexcept;

/// Applies dihedral transform t in [0, 8): t % 4 quarter turns, then a
/// left-right mirror when t >= 4.
PatternCode transform_pattern(PatternCode code, int t) noexcept;

/// Swaps rows and columns of the window.
PatternCode transpose_pattern(PatternCode code) noexcept;

/// Map from the 512 window codes to the 102 classes of the dihedral group.
/// Class ids are the ascending rank of each class's minimum code.
class PatternCodec {
 public:
  static const PatternCodec& instance();

  int class_of(PatternCode code) const noexcept { return class_of_[code]; }
  PatternCode representative(int class_id) const noexcept { return representative_[class_id]; }
  int class_size(int class_id) const noexcept { return class_size_[class_id]; }

  const std::array<std::uint8_t, kPatternCount>& class_table() const noexcept { return class_of_; }

 private:
  PatternCodec();

  std::array<std::uint8_t, kPatternCount> class_of_{};
  std::array<PatternCode, kSymmetryClassCount> representative_{};
  std::array<int, kSymmetryClassCount> class_size_{};
};

inline int canonicalize(PatternCode code) noexcept { return PatternCodec::instance().class_of(code); }

}  // namespace fop
