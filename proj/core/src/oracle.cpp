#include "fop/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fop/error.hpp"

namespace fop {

BinaryImage image_from_index(int rows, int cols, std::uint64_t index) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(rows) * cols);
  for (std::size_t p = 0; p < bits.size(); ++p) bits[p] = static_cast<std::uint8_t>(index >> p & 1u);
  return BinaryImage(rows, cols, std::move(bits));
}

namespace {

double log_sum_exp_neg(std::span<const double> energies) {
  const double lowest = *std::min_element(energies.begin(), energies.end());
  double sum = 0.0;
  for (const double e : energies) sum += std::exp(-(e - lowest));
  return -lowest + std::log(sum);
}

}  // namespace

OracleResult oracle_enumerate(const FopModel& model, const GrayImage& y, bool with_features) {
  const int pixels = y.rows() * y.cols();
  if (pixels > kOracleMaxPixels) {
    throw_invalid("oracle enumeration limited to " + std::to_string(kOracleMaxPixels) + " pixels, got " +
                  std::to_string(pixels));
  }
  const GrayPyramid py = build_pyramid(y, model.scales());
  const std::uint64_t count = std::uint64_t{1} << pixels;

  std::vector<double> energies(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    const BinaryPyramid px = build_pyramid(image_from_index(y.rows(), y.cols(), s), model.scales());
    energies[s] = energy_total(model, px, py);
  }

  OracleResult result;
  result.log_partition = log_sum_exp_neg(energies);
  result.marginals.assign(static_cast<std::size_t>(pixels), 0.0);
  if (with_features) result.expected_features.assign(model.layout().parameter_count(), 0.0);
  for (std::uint64_t s = 0; s < count; ++s) {
    const double prob = std::exp(-energies[s] - result.log_partition);
    for (int p = 0; p < pixels; ++p) {
      if (s >> p & 1u) result.marginals[static_cast<std::size_t>(p)] += prob;
    }
    if (with_features) {
      const BinaryPyramid px = build_pyramid(image_from_index(y.rows(), y.cols(), s), model.scales());
      const FeatureVector phi = features(model.layout(), px, py);
      for (std::size_t f = 0; f < phi.counts.size(); ++f) {
        if (phi.counts[f] != 0) result.expected_features[f] += prob * static_cast<double>(phi.counts[f]);
      }
    }
  }
  return result;
}

std::vector<double> oracle_conditional(const FopModel& model, const GrayImage& y, const BinaryImage& x,
                                       std::span<const Pixel> pixels) {
  if (pixels.size() > static_cast<std::size_t>(kOracleMaxPixels)) throw_invalid("oracle conditional too large");
  const GrayPyramid py = build_pyramid(y, model.scales());
  const std::uint64_t count = std::uint64_t{1} << pixels.size();
  std::vector<double> energies(count);
  BinaryImage work = x;
  for (std::uint64_t c = 0; c < count; ++c) {
    for (std::size_t t = 0; t < pixels.size(); ++t) work.set(pixels[t].row, pixels[t].col, c >> t & 1u);
    energies[c] = energy_total(model, build_pyramid(work, model.scales()), py);
  }
  const double log_z = log_sum_exp_neg(energies);
  for (double& e : energies) e = std::exp(-e - log_z);
  return energies;
}

double oracle_nll(const FopModel& model, const BinaryImage& x, const GrayImage& y) {
  const OracleResult r = oracle_enumerate(model, y);
  const double e = energy_total(model, build_pyramid(x, model.scales()), build_pyramid(y, model.scales()));
  return e + r.log_partition;
}

}  // namespace fop
