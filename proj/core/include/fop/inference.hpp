#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fop/model.hpp"
#include "fop/sampler.hpp"

namespace fop {

/// Per-pixel estimate of p(x(i,j) = 1 | y).
struct PosteriorMap {
  int rows = 0;
  int cols = 0;
  std::vector<double> probability;  // row-major, each in [0, 1]
  std::int64_t samples = 0;

  double at(int i, int j) const { return probability[static_cast<std::size_t>(i) * cols + j]; }
};

struct InferenceOptions {
  int burn_in = 50;   // sweeps discarded before averaging
  int samples = 200;  // sweeps after burn-in
  int thin = 1;       // keep every thin-th sweep
  Schedule schedule;
  std::uint64_t seed = 0;
};

/// Runs one band chain from the all-off image and averages the thinned
/// post-burn-in states. The proposal model defaults to the level-0 slice of
/// `model`; pass `proposal` to use a separately trained single-scale model.
PosteriorMap infer_marginals(const FopModel& model, const GrayImage& y, const InferenceOptions& options,
                             const FopModel* proposal = nullptr, std::vector<SweepRecord>* trace = nullptr);

/// 16-bit encoding round(p * 65535).
GrayImage posterior_to_gray(const PosteriorMap& map);
PosteriorMap posterior_from_gray(const GrayImage& img);
void write_posterior_csv(std::ostream& out, const PosteriorMap& map);

/// Degenerate map with probability 1 on the image's on pixels and 0 elsewhere.
PosteriorMap posterior_from_binary(const BinaryImage& x);

}  // namespace fop
