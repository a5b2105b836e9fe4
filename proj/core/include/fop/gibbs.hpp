#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fop/chain.hpp"

namespace fop {

struct GibbsOptions {
  int max_block = 20;
};

/// Exact conditional p(x_B | y, x_rest) for a block of distinct pixels.
/// Entry c is the probability of the configuration whose bit t is the value
/// of block[t]. Configurations are visited in Gray-code order so each step is
/// one incremental single-pixel flip. The chain is left unchanged.
std::vector<double> block_conditional(Chain& chain, const CompiledModel& model, const GrayPyramid& py,
                                      std::span<const Pixel> block, const GibbsOptions& options = {});

/// Same conditional by rebuilding the pyramid and evaluating the full energy
/// for every configuration.
std::vector<double> block_conditional_naive(const BinaryImage& x, const FopModel& model,
                                            const GrayPyramid& py, std::span<const Pixel> block,
                                            const GibbsOptions& options = {});

/// Inverse-CDF draw from a normalized distribution with one uniform u in [0,1).
std::size_t sample_index(std::span<const double> probabilities, double u);

/// Resamples the block exactly from its conditional. Returns the chosen
/// configuration index.
std::uint32_t gibbs_block(Chain& chain, const CompiledModel& model, const GrayPyramid& py,
                          std::span<const Pixel> block, const GibbsOptions& options = {});

}  // namespace fop
