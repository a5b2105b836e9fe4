#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fop {

/// Seed derivation for independent streams: splitmix64 applied to the
/// master seed mixed with the stream index. Stable across platforms.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream);

/// Reproducible random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all variate generation is done here
/// rather than through std::*_distribution so draws are identical on every
/// standard library.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64/splitmix64-streams/u53";

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one variate per call).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace fop
