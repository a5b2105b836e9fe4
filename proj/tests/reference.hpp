#pragma once

// Naive reimplementations used as independent oracles. Nothing here calls
// into the library's pattern, pyramid or energy code.

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "fop/image.hpp"
#include "fop/model.hpp"

namespace ref {

using Grid = std::vector<std::vector<int>>;

inline Grid to_grid(const fop::BinaryImage& x) {
  Grid g(static_cast<std::size_t>(x.rows()), std::vector<int>(static_cast<std::size_t>(x.cols())));
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) g[i][j] = x(i, j);
  return g;
}

inline Grid to_grid(const fop::GrayImage& y) {
  Grid g(static_cast<std::size_t>(y.rows()), std::vector<int>(static_cast<std::size_t>(y.cols())));
  for (int i = 0; i < y.rows(); ++i)
    for (int j = 0; j < y.cols(); ++j) g[i][j] = y(i, j);
  return g;
}

inline int at(const Grid& g, int i, int j) {
  if (i < 0 || j < 0 || i >= static_cast<int>(g.size()) || j >= static_cast<int>(g[0].size())) return 0;
  return g[i][j];
}

inline Grid coarsen_or(const Grid& g) {
  const int n = static_cast<int>(g.size()), m = static_cast<int>(g[0].size());
  Grid out((n + 1) / 2, std::vector<int>((m + 1) / 2, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (g[i][j]) out[i / 2][j / 2] = 1;
  return out;
}

inline Grid coarsen_avg(const Grid& g) {
  const int n = static_cast<int>(g.size()), m = static_cast<int>(g[0].size());
  Grid sum((n + 1) / 2, std::vector<int>((m + 1) / 2, 0));
  Grid cnt = sum;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      sum[i / 2][j / 2] += g[i][j];
      cnt[i / 2][j / 2] += 1;
    }
  for (std::size_t i = 0; i < sum.size(); ++i)
    for (std::size_t j = 0; j < sum[0].size(); ++j) sum[i][j] /= cnt[i][j];
  return sum;
}

using Window = std::array<std::array<int, 3>, 3>;

inline int encode(const Window& w) {
  int code = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (w[r][c]) code |= 1 << (3 * r + c);
  return code;
}

inline Window decode(int code) {
  Window w{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) w[r][c] = code >> (3 * r + c) & 1;
  return w;
}

inline Window rot90(const Window& w) {
  Window o{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) o[c][2 - r] = w[r][c];
  return o;
}

inline Window mirror(const Window& w) {
  Window o{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) o[r][2 - c] = w[r][c];
  return o;
}

/// Smallest code among the 8 rotations/reflections.
inline int canonical_min(int code) {
  Window w = decode(code);
  int best = code;
  for (int f = 0; f < 2; ++f) {
    for (int r = 0; r < 4; ++r) {
      best = std::min(best, encode(w));
      w = rot90(w);
    }
    w = mirror(w);
  }
  return best;
}

/// Class index: rank of the canonical minimum among all canonical minima.
inline int class_index(int code) {
  static const std::vector<int> minima = [] {
    std::set<int> s;
    for (int c = 0; c < 512; ++c) s.insert(canonical_min(c));
    return std::vector<int>(s.begin(), s.end());
  }();
  return static_cast<int>(std::lower_bound(minima.begin(), minima.end(), canonical_min(code)) - minima.begin());
}

inline int window_code(const Grid& g, int i, int j) {
  Window w{};
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) w[dr + 1][dc + 1] = at(g, i + dr, j + dc);
  return encode(w);
}

inline std::size_t weight_index(const fop::ModelLayout& layout, int k, int code) {
  const int pattern = layout.mode == fop::PatternMode::invariant ? class_index(code) : code;
  return static_cast<std::size_t>(k) * static_cast<std::size_t>(layout.block_size()) +
         static_cast<std::size_t>(pattern);
}

/// Full energy from scratch: pyramids, windows and data terms by nested loops.
inline double energy(const fop::FopModel& model, const fop::BinaryImage& x, const fop::GrayImage& y) {
  const auto& layout = model.layout();
  const auto w = model.weights();
  Grid gx = to_grid(x);
  Grid gy = to_grid(y);
  double e = 0.0;
  for (int k = 0; k < layout.scales; ++k) {
    if (k > 0) {
      gx = coarsen_or(gx);
      gy = coarsen_avg(gy);
    }
    const std::size_t data = static_cast<std::size_t>(k) * layout.block_size() + layout.pattern_count();
    for (int i = 0; i < static_cast<int>(gx.size()); ++i)
      for (int j = 0; j < static_cast<int>(gx[0].size()); ++j) {
        e += w[weight_index(layout, k, window_code(gx, i, j))];
        if (gx[i][j]) e += w[data + static_cast<std::size_t>(gy[i][j])];
      }
  }
  return e;
}

/// Feature counts phi(x, y) laid out like the weight vector.
inline std::vector<double> features(const fop::ModelLayout& layout, const fop::BinaryImage& x,
                                    const fop::GrayImage& y) {
  std::vector<double> phi(layout.parameter_count(), 0.0);
  Grid gx = to_grid(x);
  Grid gy = to_grid(y);
  for (int k = 0; k < layout.scales; ++k) {
    if (k > 0) {
      gx = coarsen_or(gx);
      gy = coarsen_avg(gy);
    }
    const std::size_t data = static_cast<std::size_t>(k) * layout.block_size() + layout.pattern_count();
    for (int i = 0; i < static_cast<int>(gx.size()); ++i)
      for (int j = 0; j < static_cast<int>(gx[0].size()); ++j) {
        phi[weight_index(layout, k, window_code(gx, i, j))] += 1.0;
        if (gx[i][j]) phi[data + static_cast<std::size_t>(gy[i][j])] += 1.0;
      }
  }
  return phi;
}

inline fop::BinaryImage from_index(int rows, int cols, std::uint64_t index) {
  fop::BinaryImage x(rows, cols);
  for (int p = 0; p < rows * cols; ++p) x.set(p / cols, p % cols, index >> p & 1u);
  return x;
}

}  // namespace ref
