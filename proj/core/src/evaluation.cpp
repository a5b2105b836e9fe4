#include "fop/evaluation.hpp"

#include <cstdint>
#include <iomanip>
#include <ostream>

#include "fop/error.hpp"

namespace fop {

std::vector<double> uniform_thresholds(int count) {
  if (count < 2) throw_invalid("need at least two thresholds");
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[static_cast<std::size_t>(k)] = static_cast<double>(k) / (count - 1);
  return t;
}

PrCurve pr_curve(std::span<const PosteriorMap> predictions, std::span<const BinaryImage> truths,
                 std::span<const double> thresholds) {
  if (predictions.empty()) throw_invalid("precision-recall needs at least one image");
  if (predictions.size() != truths.size()) throw_invalid("prediction and truth counts differ");
  if (thresholds.empty()) throw_invalid("precision-recall needs at least one threshold");
  for (std::size_t t = 1; t < thresholds.size(); ++t) {
    if (!(thresholds[t] > thresholds[t - 1])) throw_invalid("thresholds must be strictly increasing");
  }

  std::vector<std::int64_t> true_pos(thresholds.size(), 0);
  std::vector<std::int64_t> predicted(thresholds.size(), 0);
  std::int64_t positives = 0;
  for (std::size_t n = 0; n < predictions.size(); ++n) {
    const auto& pred = predictions[n];
    const auto& truth = truths[n];
    if (pred.rows != truth.rows() || pred.cols != truth.cols()) {
      throw_invalid("prediction and truth shapes differ for image " + std::to_string(n));
    }
    const auto bits = truth.bits();
    for (std::size_t k = 0; k < bits.size(); ++k) {
      positives += bits[k];
      const double score = pred.probability[k];
      for (std::size_t t = 0; t < thresholds.size() && score >= thresholds[t]; ++t) {
        ++predicted[t];
        true_pos[t] += bits[k];
      }
    }
  }
  if (positives == 0) throw_invalid("ground truth has no positive pixels; recall undefined");

  PrCurve curve;
  double last_precision = 1.0;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    PrPoint p{thresholds[t], last_precision, 0.0};
    if (predicted[t] > 0) {
      p.precision = static_cast<double>(true_pos[t]) / static_cast<double>(predicted[t]);
      p.recall = static_cast<double>(true_pos[t]) / static_cast<double>(positives);
    }
    last_precision = p.precision;
    curve.points.push_back(p);
  }
  double area = 0.0;
  for (std::size_t t = 1; t < curve.points.size(); ++t) {
    const auto& a = curve.points[t - 1];
    const auto& b = curve.points[t];
    area += (a.recall - b.recall) * 0.5 * (a.precision + b.precision);
  }
  area += curve.points.back().recall * curve.points.back().precision;
  curve.average_precision = area;
  return curve;
}

void write_pr_csv(std::ostream& out, const PrCurve& curve) {
  out << "threshold,precision,recall\n";
  out << std::setprecision(17);
  for (const auto& p : curve.points) out << p.threshold << ',' << p.precision << ',' << p.recall << '\n';
  out << "AP," << curve.average_precision << '\n';
}

PosteriorMap raw_observation_score(const GrayImage& y, double mu_off, double mu_on) {
  const double top = static_cast<double>(y.levels() - 1);
  if (top <= 0.0) throw_invalid("observation needs at least 2 gray levels");
  PosteriorMap map{y.rows(), y.cols(), std::vector<double>(y.size()), 1};
  const auto px = y.pixels();
  for (std::size_t k = 0; k < px.size(); ++k) {
    const double v = px[k] / top;
    map.probability[k] = mu_on < mu_off ? 1.0 - v : v;
  }
  return map;
}

}  // namespace fop
