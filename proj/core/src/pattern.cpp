#include "fop/pattern.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

namespace fop {

PatternCode pattern_at(const BinaryImage& img, int i, int j) noexcept {
  if (i >= 1 && j >= 1 && i + 1 < img.rows() && j + 1 < img.cols()) {
    const std::uint8_t* up = img.bits().data() + static_cast<std::size_t>(i - 1) * img.cols() + (j - 1);
    const std::uint8_t* mid = up + img.cols();
    const std::uint8_t* down = mid + img.cols();
    return static_cast<PatternCode>(up[0] | up[1] << 1 | up[2] << 2 | mid[0] << 3 | mid[1] << 4 | mid[2] << 5 |
                                    down[0] << 6 | down[1] << 7 | down[2] << 8);
  }
  PatternCode code = 0;
  int bit = 0;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc, ++bit) {
      if (img.value_or_zero(i + dr, j + dc)) code |= static_cast<PatternCode>(1u << bit);
    }
  }
  return code;
}

PatternCode transform_pattern(PatternCode code, int t) noexcept {
  PatternCode out = 0;
  for (int r = -1; r <= 1; ++r) {
    for (int c = -1; c <= 1; ++c) {
      if (!(code >> (3 * (r + 1) + (c + 1)) & 1u)) continue;
      int rr = r;
      int cc = c;
      for (int q = 0; q < t % 4; ++q) {
        const int tmp = rr;
        rr = cc;
        cc = -tmp;
      }
      if (t >= 4) cc = -cc;
      out |= static_cast<PatternCode>(1u << (3 * (rr + 1) + (cc + 1)));
    }
  }
  return out;
}

PatternCode transpose_pattern(PatternCode code) noexcept {
  PatternCode out = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (code >> (3 * r + c) & 1u) out |= static_cast<PatternCode>(1u << (3 * c + r));
  return out;
}

PatternCodec::PatternCodec() {
  std::array<PatternCode, kPatternCount> min_code{};
  for (int code = 0; code < kPatternCount; ++code) {
    PatternCode best = static_cast<PatternCode>(code);
    for (int t = 1; t < kDihedralCount; ++t)
      best = std::min(best, transform_pattern(static_cast<PatternCode>(code), t));
    min_code[code] = best;
  }
  std::vector<PatternCode> minima(min_code.begin(), min_code.end());
  std::sort(minima.begin(), minima.end());
  minima.erase(std::unique(minima.begin(), minima.end()), minima.end());
  assert(minima.size() == kSymmetryClassCount);

  for (int code = 0; code < kPatternCount; ++code) {
    const auto rank = std::lower_bound(minima.begin(), minima.end(), min_code[code]) - minima.begin();
    class_of_[code] = static_cast<std::uint8_t>(rank);
    ++class_size_[rank];
  }
  std::copy(minima.begin(), minima.end(), representative_.begin());
}

const PatternCodec& PatternCodec::instance() {
  static const PatternCodec codec;
  return codec;
}

}  // namespace fop
