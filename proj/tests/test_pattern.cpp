#include <gtest/gtest.h>

#include <set>

#include "fop/pattern.hpp"
#include "helpers.hpp"
#include "reference.hpp"

using namespace fop;

TEST(Pattern, ExactlyOneHundredTwoClasses) {
  std::set<int> ids;
  for (int c = 0; c < kPatternCount; ++c) ids.insert(canonicalize(static_cast<PatternCode>(c)));
  EXPECT_EQ(ids.size(), 102u);
  EXPECT_EQ(*ids.begin(), 0);
  EXPECT_EQ(*ids.rbegin(), 101);
}

TEST(Pattern, BurnsideCountAgrees) {
  // Average number of fixed windows over the 8 group elements.
  int fixed = 0;
  for (int t = 0; t < kDihedralCount; ++t)
    for (int c = 0; c < kPatternCount; ++c)
      if (transform_pattern(static_cast<PatternCode>(c), t) == c) ++fixed;
  EXPECT_EQ(fixed % 8, 0);
  EXPECT_EQ(fixed / 8, 102);
}

TEST(Pattern, ClassIdsMatchBruteForceRanking) {
  for (int c = 0; c < kPatternCount; ++c) {
    EXPECT_EQ(canonicalize(static_cast<PatternCode>(c)), ref::class_index(c)) << "code " << c;
  }
}

TEST(Pattern, ClassesAreOrbits) {
  const auto& codec = PatternCodec::instance();
  int total = 0;
  for (int k = 0; k < kSymmetryClassCount; ++k) {
    const int size = codec.class_size(k);
    EXPECT_EQ(8 % size, 0) << "class " << k;
    EXPECT_EQ(codec.class_of(codec.representative(k)), k);
    total += size;
  }
  EXPECT_EQ(total, kPatternCount);
  for (int c = 0; c < kPatternCount; ++c) {
    const auto code = static_cast<PatternCode>(c);
    EXPECT_LE(codec.representative(codec.class_of(code)), code);
    for (int t = 0; t < kDihedralCount; ++t) {
      EXPECT_EQ(codec.class_of(transform_pattern(code, t)), codec.class_of(code));
    }
  }
}

TEST(Pattern, KnownClassSizes) {
  const auto& codec = PatternCodec::instance();
  EXPECT_EQ(codec.class_size(canonicalize(0)), 1);
  EXPECT_EQ(codec.class_size(canonicalize(511)), 1);
  EXPECT_EQ(codec.class_size(canonicalize(1u << 4)), 1);
  EXPECT_EQ(codec.class_size(canonicalize(1u << 0)), 4);  // one corner
  EXPECT_EQ(codec.class_size(canonicalize(1u << 1)), 4);  // one edge
  EXPECT_EQ(canonicalize(0), 0);
}

TEST(Pattern, TransformsFormTheDihedralGroup) {
  for (int c = 0; c < kPatternCount; ++c) {
    const auto code = static_cast<PatternCode>(c);
    EXPECT_EQ(transform_pattern(code, 0), code);
    EXPECT_EQ(transform_pattern(transform_pattern(code, 1), 3), code);
    EXPECT_EQ(transform_pattern(transform_pattern(code, 4), 4), code);
    EXPECT_EQ(transpose_pattern(transpose_pattern(code)), code);
    bool transpose_in_group = false;
    for (int t = 0; t < kDihedralCount; ++t) transpose_in_group |= transform_pattern(code, t) == transpose_pattern(code);
    EXPECT_TRUE(transpose_in_group);
  }
  // A quarter turn moves the top-left corner to the top-right.
  EXPECT_EQ(transform_pattern(1u << 0, 1), 1u << 2);
  EXPECT_EQ(transpose_pattern(1u << 1), 1u << 3);
}

TEST(Pattern, WindowCodeLayoutAndZeroPadding) {
  BinaryImage x(3, 3);
  x.set(0, 0, true);
  EXPECT_EQ(pattern_at(x, 1, 1), 1u << 0);
  EXPECT_EQ(pattern_at(x, 0, 0), 1u << 4);
  x.set(2, 2, true);
  EXPECT_EQ(pattern_at(x, 1, 1), (1u << 0) | (1u << 8));
  EXPECT_EQ(pattern_at(x, 2, 2), 1u << 4);

  BinaryImage ones(2, 2, {1, 1, 1, 1});
  EXPECT_EQ(pattern_at(ones, 0, 0), (1u << 4) | (1u << 5) | (1u << 7) | (1u << 8));
}

TEST(Pattern, WindowCodesMatchReference) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = 1 + static_cast<int>(rng.below(7));
    const int cols = 1 + static_cast<int>(rng.below(7));
    const BinaryImage x = test::random_binary(rows, cols, 0.5, rng);
    const auto g = ref::to_grid(x);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) EXPECT_EQ(pattern_at(x, i, j), ref::window_code(g, i, j));
  }
}
