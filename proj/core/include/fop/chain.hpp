#pragma once

#include <cstdint>

#include "fop/incremental.hpp"
#include "fop/random.hpp"

namespace fop {

/// One Markov chain over hidden images: the current x, its OR pyramid kept in
/// sync under every update, the chain's private random stream and a sweep
/// counter. A chain is owned by one thread at a time.
class Chain {
 public:
  Chain() = default;
  Chain(const BinaryImage& start, int scales, std::uint64_t seed);

  const BinaryImage& image() const { return pyramid_.image(); }
  const BinaryPyramid& pyramid() const noexcept { return pyramid_.pyramid(); }
  int scales() const noexcept { return pyramid_.scales(); }

  IncrementalPyramid& pyramid_state() noexcept { return pyramid_; }
  DeltaEvaluator& evaluator() noexcept { return evaluator_; }
  Rng& rng() noexcept { return rng_; }
  void reseed(std::uint64_t seed) { rng_ = Rng(seed); }

  std::int64_t sweeps() const noexcept { return sweeps_; }
  void count_sweep() noexcept { ++sweeps_; }

  /// Running energy under the target model, advanced by accepted moves.
  /// Only meaningful after set_energy() was given a starting value.
  double energy() const noexcept { return energy_; }
  void set_energy(double e) noexcept { energy_ = e; }
  void add_energy(double delta) noexcept { energy_ += delta; }

  /// Full rebuild comparison; for tests and debug checks.
  bool consistent() const;

 private:
  IncrementalPyramid pyramid_;
  DeltaEvaluator evaluator_;
  Rng rng_;
  std::int64_t sweeps_ = 0;
  double energy_ = 0.0;
};

}  // namespace fop
