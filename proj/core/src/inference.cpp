#include "fop/inference.hpp"

#include <cmath>
#include <ostream>

#include "fop/error.hpp"

namespace fop {

PosteriorMap infer_marginals(const FopModel& model, const GrayImage& y, const InferenceOptions& options,
                             const FopModel* proposal, std::vector<SweepRecord>* trace) {
  if (options.burn_in < 0 || options.samples < 1 || options.thin < 1) {
    throw_invalid("inference needs burn_in >= 0, samples >= 1 and thin >= 1");
  }
  if (y.levels() > model.levels()) throw_invalid("observation has more gray levels than the model");
  if (proposal && proposal->scales() != 1) throw_invalid("proposal model must be single-scale");

  const CompiledModel p(model);
  const CompiledModel q(proposal ? *proposal : model.level0_slice());
  const bool exact = model.scales() == 1 && proposal == nullptr;
  const GrayPyramid py = build_pyramid(y, model.scales());

  Chain chain(BinaryImage(y.rows(), y.cols()), model.scales(), options.seed);
  chain.set_energy(energy_total(model, chain.pyramid(), py));

  PosteriorMap map{y.rows(), y.cols(), std::vector<double>(y.size(), 0.0), 0};
  std::vector<std::int64_t> on_counts(y.size(), 0);
  const int total = options.burn_in + options.samples;
  for (int s = 0; s < total; ++s) {
    const auto stats = sweep(chain, p, exact ? p : q, py, options.schedule);
    if (trace) append_records(*trace, chain.sweeps(), stats);
    const int after = s - options.burn_in;
    if (after < 0 || (after + 1) % options.thin != 0) continue;
    const auto bits = chain.image().bits();
    for (std::size_t k = 0; k < bits.size(); ++k) on_counts[k] += bits[k];
    ++map.samples;
  }
  for (std::size_t k = 0; k < on_counts.size(); ++k) {
    map.probability[k] = static_cast<double>(on_counts[k]) / static_cast<double>(map.samples);
  }
  return map;
}

GrayImage posterior_to_gray(const PosteriorMap& map) {
  std::vector<int> pixels(map.probability.size());
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    const double p = map.probability[k];
    if (!(p >= 0.0 && p <= 1.0)) throw_invalid("posterior value outside [0, 1]");
    pixels[k] = static_cast<int>(std::lround(p * 65535.0));
  }
  return GrayImage(map.rows, map.cols, 65536, std::move(pixels));
}

PosteriorMap posterior_from_gray(const GrayImage& img) {
  const double scale = static_cast<double>(img.levels() - 1);
  if (scale <= 0.0) throw_data("posterior image needs at least 2 levels");
  PosteriorMap map{img.rows(), img.cols(), std::vector<double>(img.size()), 0};
  const auto px = img.pixels();
  for (std::size_t k = 0; k < px.size(); ++k) map.probability[k] = px[k] / scale;
  return map;
}

void write_posterior_csv(std::ostream& out, const PosteriorMap& map) {
  out << "row,col,probability\n";
  for (int i = 0; i < map.rows; ++i)
    for (int j = 0; j < map.cols; ++j) out << i << ',' << j << ',' << map.at(i, j) << '\n';
}

PosteriorMap posterior_from_binary(const BinaryImage& x) {
  PosteriorMap map{x.rows(), x.cols(), std::vector<double>(x.size()), 1};
  const auto bits = x.bits();
  for (std::size_t k = 0; k < bits.size(); ++k) map.probability[k] = bits[k];
  return map;
}

}  // namespace fop
