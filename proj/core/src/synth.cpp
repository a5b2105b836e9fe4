#include "fop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fop/error.hpp"
#include "fop/random.hpp"

namespace fop {

GrayImage synth_observe(const BinaryImage& x, const ObservationModel& obs, std::uint64_t seed) {
  if (obs.levels < 2) throw_invalid("observation model needs at least 2 gray levels");
  if (obs.sigma < 0.0) throw_invalid("observation noise must be non-negative");
  Rng rng(seed);
  std::vector<int> pixels(x.size());
  const auto bits = x.bits();
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    const double mean = bits[p] ? obs.mu_on : obs.mu_off;
    const double draw = std::round(mean + obs.sigma * rng.normal());
    pixels[p] = static_cast<int>(std::clamp(draw, 0.0, static_cast<double>(obs.levels - 1)));
  }
  return GrayImage(x.rows(), x.cols(), obs.levels, std::move(pixels));
}

namespace {

struct Point {
  double r;
  double c;
};

// 8-connected one-pixel-wide segment between rounded endpoints.
void draw_segment(BinaryImage& img, Point a, Point b) {
  int r0 = static_cast<int>(std::lround(a.r));
  int c0 = static_cast<int>(std::lround(a.c));
  const int r1 = static_cast<int>(std::lround(b.r));
  const int c1 = static_cast<int>(std::lround(b.c));
  const int dr = std::abs(r1 - r0);
  const int dc = std::abs(c1 - c0);
  const int sr = r0 < r1 ? 1 : -1;
  const int sc = c0 < c1 ? 1 : -1;
  int err = dc - dr;
  for (;;) {
    if (img.contains(r0, c0)) img.set(r0, c0, true);
    if (r0 == r1 && c0 == c1) break;
    const int e2 = 2 * err;
    if (e2 > -dr) {
      err -= dr;
      c0 += sc;
    }
    if (e2 < dc) {
      err += dc;
      r0 += sr;
    }
  }
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

void closed_outline(BinaryImage& img, Rng& rng) {
  const double size = std::min(img.rows(), img.cols());
  const double radius = uniform(rng, 0.12, 0.28) * size;
  const Point center{uniform(rng, radius, img.rows() - radius), uniform(rng, radius, img.cols() - radius)};
  const int vertices = 5 + static_cast<int>(rng.below(5));
  const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  std::vector<Point> ring;
  for (int v = 0; v < vertices; ++v) {
    const double angle = phase + 2.0 * std::numbers::pi * (v + uniform(rng, -0.25, 0.25)) / vertices;
    const double r = radius * uniform(rng, 0.7, 1.2);
    ring.push_back({center.r + r * std::sin(angle), center.c + r * std::cos(angle)});
  }
  for (int v = 0; v < vertices; ++v) draw_segment(img, ring[static_cast<std::size_t>(v)],
                                                  ring[static_cast<std::size_t>((v + 1) % vertices)]);
}

void open_polyline(BinaryImage& img, Rng& rng) {
  const double size = std::min(img.rows(), img.cols());
  Point p{uniform(rng, 0.0, img.rows() - 1.0), uniform(rng, 0.0, img.cols() - 1.0)};
  double heading = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const int segments = 3 + static_cast<int>(rng.below(4));
  for (int s = 0; s < segments; ++s) {
    const double length = uniform(rng, 0.08, 0.18) * size;
    heading += uniform(rng, -0.7, 0.7);
    const Point q{p.r + length * std::sin(heading), p.c + length * std::cos(heading)};
    draw_segment(img, p, q);
    p = q;
  }
}

BinaryImage contour_image(int rows, int cols, Rng& rng) {
  BinaryImage img(rows, cols);
  const int outlines = 1 + static_cast<int>(rng.below(2));
  const int polylines = 1 + static_cast<int>(rng.below(2));
  for (int k = 0; k < outlines; ++k) closed_outline(img, rng);
  for (int k = 0; k < polylines; ++k) open_polyline(img, rng);
  return img;
}

BinaryImage keep_largest_component(const BinaryImage& img) {
  const auto comps = label_components(img);
  if (comps.count <= 1) return img;
  std::vector<std::size_t> sizes(static_cast<std::size_t>(comps.count), 0);
  for (const int l : comps.labels)
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  BinaryImage out(img.rows(), img.cols());
  for (int i = 0; i < img.rows(); ++i)
    for (int j = 0; j < img.cols(); ++j)
      out.set(i, j, comps.labels[static_cast<std::size_t>(i) * img.cols() + j] == keep);
  return out;
}

BinaryImage blob_image(int rows, int cols, Rng& rng) {
  const double size = std::min(rows, cols);
  const double radius = uniform(rng, 0.2, 0.33) * size;
  const Point center{uniform(rng, 0.4, 0.6) * rows, uniform(rng, 0.4, 0.6) * cols};
  double amplitude[5] = {};
  double phase[5] = {};
  for (int k = 2; k < 5; ++k) {
    amplitude[k] = uniform(rng, 0.0, 0.18);
    phase[k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  }
  BinaryImage img(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double dr = i - center.r;
      const double dc = j - center.c;
      const double theta = std::atan2(dr, dc);
      double r = radius;
      for (int k = 2; k < 5; ++k) r += radius * amplitude[k] * std::cos(k * theta + phase[k]);
      img.set(i, j, std::hypot(dr, dc) <= r);
    }
  }
  // A thin stem leaving the boundary.
  const double stem_angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double stem_length = radius * uniform(rng, 1.1, 1.6);
  draw_segment(img, center, {center.r + stem_length * std::sin(stem_angle), center.c + stem_length * std::cos(stem_angle)});
  return keep_largest_component(img);
}

}  // namespace

std::vector<BinaryImage> synth_shapes(ShapeKind kind, int count, int rows, int cols, std::uint64_t seed) {
  if (count < 0) throw_invalid("shape count must be non-negative");
  if (rows < 4 || cols < 4) throw_invalid("synthetic shapes need images of at least 4x4");
  std::vector<BinaryImage> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(n)));
    out.push_back(kind == ShapeKind::contours ? contour_image(rows, cols, rng) : blob_image(rows, cols, rng));
  }
  return out;
}

}  // namespace fop
