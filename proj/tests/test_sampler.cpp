#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "fop/band.hpp"
#include "fop/error.hpp"
#include "fop/gibbs.hpp"
#include "fop/oracle.hpp"
#include "fop/sampler.hpp"
#include "helpers.hpp"
#include "reference.hpp"

using namespace fop;

namespace {

std::vector<Pixel> band_pixels(const BinaryImage& x, const Band& band) {
  std::vector<Pixel> out;
  for (int j = 0; j < band_length(x, band); ++j)
    for (int r = 0; r < band.height; ++r) out.push_back(band_pixel(band, r, j));
  return out;
}

// Index into oracle_conditional for the given band configuration.
std::size_t conditional_index(const Band& band, std::span<const std::uint32_t> states) {
  std::size_t index = 0;
  int bit = 0;
  for (const std::uint32_t z : states)
    for (int r = 0; r < band.height; ++r, ++bit) index |= static_cast<std::size_t>(z >> r & 1u) << bit;
  return index;
}

std::vector<std::uint32_t> states_from_index(const Band& band, int columns, std::size_t index) {
  std::vector<std::uint32_t> states(static_cast<std::size_t>(columns), 0);
  int bit = 0;
  for (int j = 0; j < columns; ++j)
    for (int r = 0; r < band.height; ++r, ++bit) states[static_cast<std::size_t>(j)] |= (index >> bit & 1u) << r;
  return states;
}

}  // namespace

TEST(BandForward, FullBandPartitionMatchesOracle) {
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const FopModel m = test::random_model({1, 8, PatternMode::invariant}, 1.5, rng);
    const GrayImage y = test::random_gray(3, 5, 8, rng);
    const OracleResult oracle = oracle_enumerate(m, y);
    const ForwardTable t = band_forward(CompiledModel(m), y, BinaryImage(3, 5), Band{Axis::horizontal, 0, 3});
    EXPECT_LT(std::abs(t.log_partition() - oracle.log_partition), 1e-10 * std::abs(oracle.log_partition));
    const ForwardTable v =
        band_forward(CompiledModel(m), y, BinaryImage(3, 5), Band{Axis::vertical, 0, 5}, BandOptions{8});
    EXPECT_LT(std::abs(v.log_partition() - oracle.log_partition), 1e-10 * std::abs(oracle.log_partition));
  }
}

TEST(BandForward, ConditionalMatchesOracleInsideLargerImage) {
  Rng rng(2);
  for (int trial = 0; trial < 12; ++trial) {
    const FopModel m = test::random_model({1, 4, trial % 2 ? PatternMode::raw : PatternMode::invariant}, 1.0, rng);
    const GrayImage y = test::random_gray(6, 5, 4, rng);
    const BinaryImage x = test::random_binary(6, 5, 0.5, rng);
    const Band band{trial % 3 == 0 ? Axis::vertical : Axis::horizontal, static_cast<int>(rng.below(3)), 2};
    const ForwardTable t = band_forward(CompiledModel(m), y, x, band);
    const auto pixels = band_pixels(x, band);
    const auto exact = oracle_conditional(m, y, x, pixels);
    for (std::size_t c = 0; c < exact.size(); ++c) {
      const auto states = states_from_index(band, t.columns(), c);
      ASSERT_NEAR(std::exp(t.log_probability(states)), exact[c], 1e-12);
    }
  }
}

TEST(BandForward, TallBandWithoutTensorCache) {
  // h = 6 takes the direct per-window path.
  Rng rng(3);
  const FopModel m = test::random_model({1, 4, PatternMode::invariant}, 1.0, rng);
  const GrayImage y = test::random_gray(6, 3, 4, rng);
  const OracleResult oracle = oracle_enumerate(m, y);
  const ForwardTable t = band_forward(CompiledModel(m), y, BinaryImage(6, 3), Band{Axis::horizontal, 0, 6});
  EXPECT_NEAR(t.log_partition(), oracle.log_partition, 1e-10 * std::abs(oracle.log_partition));
  Rng draw(4);
  const auto z = t.sample(draw);
  EXPECT_EQ(z.size(), 3u);
  for (const auto s : z) EXPECT_LT(s, 64u);
}

TEST(BandForward, LogWeightsAreFiniteAndNormalized) {
  Rng rng(5);
  const FopModel m = test::random_model({1, 4, PatternMode::invariant}, 30.0, rng);
  const GrayImage y = test::random_gray(4, 40, 4, rng);
  const ForwardTable t = band_forward(CompiledModel(m), y, BinaryImage(4, 40), Band{Axis::horizontal, 1, 3});
  EXPECT_TRUE(std::isfinite(t.log_partition()));
  EXPECT_EQ(t.state_count(), 8u);
  EXPECT_TRUE(std::isfinite(t.log_weight(t.columns(), 0, 0)));
  EXPECT_THROW(t.log_weight(t.columns() + 1, 0, 0), Error);
}

TEST(BandForward, RejectsBadBands) {
  const CompiledModel m(FopModel(ModelLayout{1, 4, PatternMode::invariant}));
  const GrayImage y(4, 4, 4);
  const BinaryImage x(4, 4);
  EXPECT_THROW(band_forward(m, y, x, Band{Axis::horizontal, 2, 3}), Error);
  EXPECT_THROW(band_forward(m, y, x, Band{Axis::horizontal, 0, 0}), Error);
  EXPECT_THROW(band_forward(m, y, BinaryImage(4, 4), Band{Axis::horizontal, 0, 4}, BandOptions{3}), Error);
  const CompiledModel two(FopModel(ModelLayout{2, 4, PatternMode::invariant}));
  EXPECT_THROW(band_forward(two, y, x, Band{Axis::horizontal, 0, 2}), Error);
  EXPECT_THROW(band_forward(m, GrayImage(4, 4, 5), x, Band{Axis::horizontal, 0, 2}), Error);
}

TEST(BandSample, FrequenciesMatchConditional) {
  Rng rng(6);
  const FopModel m = test::random_model({1, 4, PatternMode::invariant}, 1.0, rng);
  const GrayImage y = test::random_gray(4, 3, 4, rng);
  const BinaryImage x = test::random_binary(4, 3, 0.5, rng);
  const Band band{Axis::horizontal, 1, 2};
  const ForwardTable t = band_forward(CompiledModel(m), y, x, band);
  const auto exact = oracle_conditional(m, y, x, band_pixels(x, band));
  std::vector<double> counts(exact.size(), 0.0);
  const int n = 100000;
  Rng draw(7);
  for (int s = 0; s < n; ++s) counts[conditional_index(band, t.sample(draw))] += 1.0;
  double tv = 0.0;
  for (std::size_t c = 0; c < exact.size(); ++c) tv += std::abs(counts[c] / n - exact[c]);
  EXPECT_LT(0.5 * tv, 0.02);
}

TEST(BandStarts, CoverEveryRow) {
  EXPECT_EQ(band_starts(10, 3, 2), (std::vector<int>{0, 2, 4, 6, 7}));
  EXPECT_EQ(band_starts(3, 3, 2), (std::vector<int>{0}));
  EXPECT_EQ(band_starts(2, 3, 2), (std::vector<int>{0}));
  for (int extent = 1; extent < 30; ++extent)
    for (int h = 1; h <= 4; ++h) {
      std::vector<int> hits(static_cast<std::size_t>(extent), 0);
      const int hh = std::min(h, extent);
      for (const int s : band_starts(extent, h, (h + 1) / 2))
        for (int r = 0; r < hh; ++r) ++hits[static_cast<std::size_t>(s + r)];
      for (const int c : hits) EXPECT_GT(c, 0);
    }
  EXPECT_EQ(Schedule{}.effective_stride(), 2);
}

TEST(Gibbs, BlockConditionalMatchesNaive) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const FopModel m = test::random_model({3, 8, PatternMode::invariant}, 1.0, rng);
    const BinaryImage x = test::random_binary(8, 8, 0.4, rng);
    const GrayPyramid py = build_pyramid(test::random_gray(8, 8, 8, rng), 3);
    std::vector<Pixel> block;
    for (int b = 0; b < 5; ++b) block.push_back({static_cast<int>(rng.below(8)), b + (b >= 2 ? 3 * static_cast<int>(rng.below(2)) : 0)});
    Chain chain(x, 3, 1);
    const auto fast = block_conditional(chain, CompiledModel(m), py, block);
    const auto naive = block_conditional_naive(x, m, py, block);
    ASSERT_EQ(fast.size(), 32u);
    for (std::size_t c = 0; c < fast.size(); ++c) ASSERT_NEAR(fast[c], naive[c], 1e-12);
    EXPECT_EQ(chain.image(), x);
    EXPECT_TRUE(chain.consistent());
  }
}

TEST(Gibbs, SampleIndexInverseCdf) {
  const std::vector<double> p{0.25, 0.0, 0.75};
  EXPECT_EQ(sample_index(p, 0.0), 0u);
  EXPECT_EQ(sample_index(p, 0.2499), 0u);
  EXPECT_EQ(sample_index(p, 0.25), 2u);
  EXPECT_EQ(sample_index(p, 0.999999), 2u);
}

TEST(MetropolisHastings, IdenticalProposalAlwaysAccepts) {
  Rng rng(9);
  const FopModel m = test::random_model({1, 8, PatternMode::invariant}, 1.0, rng);
  const GrayPyramid py = build_pyramid(test::random_gray(9, 9, 8, rng), 1);
  const CompiledModel c(m);
  Chain chain(BinaryImage(9, 9), 1, 2);
  chain.set_energy(energy_total(m, chain.pyramid(), py));
  for (int s = 0; s < 5; ++s) {
    const auto stats = sweep(chain, c, c, py, Schedule{});
    EXPECT_EQ(stats.horizontal.accepted, stats.horizontal.proposals);
    EXPECT_EQ(stats.vertical.accepted, stats.vertical.proposals);
  }
  EXPECT_NEAR(chain.energy(), energy_total(m, chain.pyramid(), py), 1e-9);
  EXPECT_TRUE(chain.consistent());
}

TEST(MetropolisHastings, MultiscaleMarginalsMatchOracle) {
  Rng rng(10);
  const FopModel m = test::random_model({2, 4, PatternMode::invariant}, 0.8, rng);
  const GrayImage y = test::random_gray(4, 4, 4, rng);
  const GrayPyramid py = build_pyramid(y, 2);
  const OracleResult oracle = oracle_enumerate(m, y);
  const CompiledModel p(m), q(m.level0_slice());
  Chain chain(BinaryImage(4, 4), 2, 11);
  std::vector<double> on(16, 0.0);
  std::int64_t steps = 0;
  MhStats total;
  for (int s = 0; s < 6000; ++s) {
    for (const Axis axis : {Axis::horizontal, Axis::vertical}) {
      for (const int start : band_starts(4, 2, 1)) {
        total += mh_band_step(chain, p, q, py, Band{axis, start, 2}, 1);
        for (int k = 0; k < 16; ++k) on[static_cast<std::size_t>(k)] += chain.image()(k / 4, k % 4);
        ++steps;
      }
    }
  }
  EXPECT_GT(total.rate(), 0.0);
  EXPECT_LT(total.rate(), 1.0);
  for (int k = 0; k < 16; ++k) EXPECT_NEAR(on[static_cast<std::size_t>(k)] / steps, oracle.marginals[static_cast<std::size_t>(k)], 0.03);
  EXPECT_TRUE(chain.consistent());
}

TEST(MetropolisHastings, RunningEnergyTracksTarget) {
  Rng rng(12);
  const FopModel m = test::random_model({3, 8, PatternMode::invariant}, 0.5, rng);
  const GrayPyramid py = build_pyramid(test::random_gray(16, 16, 8, rng), 3);
  const CompiledModel p(m), q(m.level0_slice());
  Chain chain(test::random_binary(16, 16, 0.3, rng), 3, 13);
  chain.set_energy(energy_total(m, chain.pyramid(), py));
  for (int s = 0; s < 20; ++s) sweep(chain, p, q, py, Schedule{});
  EXPECT_NEAR(chain.energy(), energy_total(m, chain.pyramid(), py), 1e-8);
  EXPECT_TRUE(chain.consistent());
  EXPECT_EQ(chain.sweeps(), 20);
}

TEST(SamplePrior, ZeroModelIsFairCoin) {
  const FopModel zero(ModelLayout{1, 2, PatternMode::invariant});
  const BinaryImage x = sample_prior(zero, 64, 64, 5, 3);
  const double density = static_cast<double>(x.count_on()) / static_cast<double>(x.size());
  EXPECT_NEAR(density, 0.5, 0.03);
}

TEST(SamplePrior, SeededRunsAreIdentical) {
  Rng rng(14);
  const FopModel m = test::random_model({2, 2, PatternMode::invariant}, 0.5, rng);
  std::vector<SweepRecord> ta, tb;
  EXPECT_EQ(sample_prior(m, 20, 17, 4, 99, {}, &ta), sample_prior(m, 20, 17, 4, 99, {}, &tb));
  ASSERT_EQ(ta.size(), 8u);
  EXPECT_EQ(ta[3].energy, tb[3].energy);
  EXPECT_NE(sample_prior(m, 20, 17, 4, 99), sample_prior(m, 20, 17, 4, 100));
}

TEST(Sampler, DiagnosticsCsv) {
  std::vector<SweepRecord> records;
  SweepStats s;
  s.horizontal = {10, 5};
  s.vertical = {10, 10};
  s.energy_after_horizontal = -1.5;
  s.energy_after_vertical = 2.0;
  append_records(records, 3, s);
  std::ostringstream out;
  write_sampler_csv(out, records);
  EXPECT_EQ(out.str(), "sweep,band_axis,accept_rate,energy\n3,horizontal,0.5,-1.5\n3,vertical,1,2\n");
}
