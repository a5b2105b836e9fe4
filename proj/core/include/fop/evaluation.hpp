#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "fop/inference.hpp"

namespace fop {

struct PrPoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Pixel-level precision/recall, pooled over all images, at each threshold
/// (a pixel is predicted on when its score is >= the threshold).
struct PrCurve {
  std::vector<PrPoint> points;  // ascending thresholds
  double average_precision = 0.0;
};

/// `count` evenly spaced thresholds covering [0, 1].
std::vector<double> uniform_thresholds(int count = 101);

/// Where a threshold selects no pixel the precision of the previous
/// threshold is carried forward. AP is the trapezoidal area under precision
/// as a function of recall, closed at recall 0 with the last precision.
PrCurve pr_curve(std::span<const PosteriorMap> predictions, std::span<const BinaryImage> truths,
                 std::span<const double> thresholds);

/// Rows `threshold,precision,recall` then `AP,<value>`.
void write_pr_csv(std::ostream& out, const PrCurve& curve);

/// Baseline score that ranks pixels by how close y is to the on-pixel mean:
/// scores rise toward mu_on and are scaled into [0, 1].
PosteriorMap raw_observation_score(const GrayImage& y, double mu_off, double mu_on);

}  // namespace fop
