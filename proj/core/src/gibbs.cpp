#include "fop/gibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fop/error.hpp"

namespace fop {

namespace {

void check_block(const BinaryImage& x, std::span<const Pixel> block, const GibbsOptions& options) {
  if (block.empty()) throw_invalid("Gibbs block is empty");
  if (static_cast<int>(block.size()) > options.max_block) {
    throw_invalid("Gibbs block of " + std::to_string(block.size()) + " pixels exceeds the cap of " +
                  std::to_string(options.max_block));
  }
  for (std::size_t a = 0; a < block.size(); ++a) {
    if (!x.contains(block[a].row, block[a].col)) throw_invalid("Gibbs block pixel outside image");
    for (std::size_t b = 0; b < a; ++b) {
      if (block[a] == block[b]) throw_invalid("Gibbs block pixels must be distinct");
    }
  }
}

std::uint32_t current_config(const BinaryImage& x, std::span<const Pixel> block) {
  std::uint32_t config = 0;
  for (std::size_t t = 0; t < block.size(); ++t) {
    if (x(block[t].row, block[t].col)) config |= 1u << t;
  }
  return config;
}

std::vector<double> normalize_neg_energies(std::vector<double> energies) {
  const double lowest = *std::min_element(energies.begin(), energies.end());
  double total = 0.0;
  for (double& e : energies) {
    e = std::exp(-(e - lowest));
    total += e;
  }
  for (double& e : energies) e /= total;
  return energies;
}

}  // namespace

std::vector<double> block_conditional(Chain& chain, const CompiledModel& model, const GrayPyramid& py,
                                      std::span<const Pixel> block, const GibbsOptions& options) {
  check_block(chain.image(), block, options);
  const std::uint32_t start = current_config(chain.image(), block);
  const std::uint32_t count = 1u << block.size();

  // energies[c] is E(config c) - E(start).
  std::vector<double> energies(count, 0.0);
  double relative = 0.0;
  std::uint32_t config = start;
  for (std::uint32_t step = 1; step < count; ++step) {
    const int t = std::countr_zero(step);
    relative += chain.evaluator().apply(chain.pyramid_state(), py, block.subspan(static_cast<std::size_t>(t), 1),
                                        model);
    config ^= 1u << t;
    energies[config] = relative;
  }
  // The last Gray code differs from the first in the top bit only.
  chain.evaluator().apply(chain.pyramid_state(), py, block.subspan(block.size() - 1, 1), model);
  return normalize_neg_energies(std::move(energies));
}

std::vector<double> block_conditional_naive(const BinaryImage& x, const FopModel& model,
                                            const GrayPyramid& py, std::span<const Pixel> block,
                                            const GibbsOptions& options) {
  check_block(x, block, options);
  const std::uint32_t count = 1u << block.size();
  std::vector<double> energies(count);
  BinaryImage work = x;
  for (std::uint32_t config = 0; config < count; ++config) {
    for (std::size_t t = 0; t < block.size(); ++t) work.set(block[t].row, block[t].col, config >> t & 1u);
    energies[config] = energy_total(model, build_pyramid(work, model.scales()), py);
  }
  return normalize_neg_energies(std::move(energies));
}

std::size_t sample_index(std::span<const double> probabilities, double u) {
  double cumulative = 0.0;
  for (std::size_t c = 0; c < probabilities.size(); ++c) {
    cumulative += probabilities[c];
    if (u < cumulative) return c;
  }
  // Rounding can leave the total a hair below 1; fall back to the last
  // configuration with nonzero mass.
  for (std::size_t c = probabilities.size(); c-- > 0;) {
    if (probabilities[c] > 0.0) return c;
  }
  return 0;
}

std::uint32_t gibbs_block(Chain& chain, const CompiledModel& model, const GrayPyramid& py,
                          std::span<const Pixel> block, const GibbsOptions& options) {
  const auto probabilities = block_conditional(chain, model, py, block, options);
  const auto chosen = static_cast<std::uint32_t>(sample_index(probabilities, chain.rng().uniform()));
  const std::uint32_t start = current_config(chain.image(), block);
  std::vector<Pixel> flips;
  for (std::size_t t = 0; t < block.size(); ++t) {
    if ((chosen ^ start) >> t & 1u) flips.push_back(block[t]);
  }
  if (!flips.empty()) {
    const double delta = chain.evaluator().apply(chain.pyramid_state(), py, flips, model);
    chain.add_energy(delta);
  }
  return chosen;
}

}  // namespace fop
