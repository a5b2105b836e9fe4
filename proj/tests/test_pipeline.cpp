#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fop/dataset.hpp"
#include "fop/error.hpp"
#include "fop/evaluation.hpp"
#include "fop/inference.hpp"
#include "fop/netpbm.hpp"
#include "fop/oracle.hpp"
#include "fop/synth.hpp"
#include "helpers.hpp"

using namespace fop;

TEST(Synth, ZeroNoiseIsExact) {
  Rng rng(1);
  const BinaryImage x = test::random_binary(10, 10, 0.5, rng);
  const GrayImage y = synth_observe(x, {150.0, 100.0, 0.0, 256}, 3);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) EXPECT_EQ(y(i, j), x(i, j) ? 100 : 150);
}

TEST(Synth, PresetsMatchPublishedSettings) {
  const auto c = ObservationModel::contour();
  EXPECT_EQ(c.mu_off, 150.0);
  EXPECT_EQ(c.mu_on, 100.0);
  EXPECT_EQ(c.sigma, 40.0);
  EXPECT_EQ(ObservationModel::leaf().sigma, 100.0);
}

TEST(Synth, ObservationStatistics) {
  // 10^5 pixels per class; sigma = 10 keeps clamping negligible.
  const ObservationModel obs{150.0, 100.0, 10.0, 256};
  for (const int on : {0, 1}) {
    BinaryImage x(250, 400);
    if (on)
      for (int i = 0; i < 250; ++i)
        for (int j = 0; j < 400; ++j) x.set(i, j, true);
    const GrayImage y = synth_observe(x, obs, 7 + static_cast<std::uint64_t>(on));
    double sum = 0.0, sq = 0.0;
    for (const int v : y.pixels()) {
      sum += v;
      sq += static_cast<double>(v) * v;
    }
    const double n = static_cast<double>(y.size());
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    const double mu = on ? obs.mu_on : obs.mu_off;
    EXPECT_LT(std::abs(mean - mu), 3.0 * obs.sigma / std::sqrt(n));
    // Rounding adds variance 1/12.
    EXPECT_LT(std::abs(sd - std::sqrt(obs.sigma * obs.sigma + 1.0 / 12.0)), 3.0 * obs.sigma / std::sqrt(2.0 * n));
  }
}

TEST(Synth, ClampsIntoRange) {
  const GrayImage y = synth_observe(BinaryImage(50, 50), {3.0, 100.0, 50.0, 8}, 2);
  EXPECT_EQ(y.levels(), 8);
  EXPECT_TRUE(std::any_of(y.pixels().begin(), y.pixels().end(), [](int v) { return v == 0; }));
  EXPECT_TRUE(std::any_of(y.pixels().begin(), y.pixels().end(), [](int v) { return v == 7; }));
}

TEST(Synth, ContoursAreSparse) {
  const auto shapes = synth_shapes(ShapeKind::contours, 50, 64, 64, 3);
  ASSERT_EQ(shapes.size(), 50u);
  for (const auto& x : shapes) {
    const double density = static_cast<double>(x.count_on()) / static_cast<double>(x.size());
    EXPECT_GT(density, 0.0);
    EXPECT_LT(density, 0.15);
  }
}

TEST(Synth, BlobsAreSingleComponents) {
  for (const auto& x : synth_shapes(ShapeKind::blobs, 50, 48, 40, 4)) {
    EXPECT_EQ(label_components(x).count, 1);
  }
  EXPECT_THROW(synth_shapes(ShapeKind::blobs, 1, 3, 8, 1), Error);
}

TEST(Synth, SeedDeterminism) {
  EXPECT_EQ(synth_shapes(ShapeKind::contours, 5, 32, 32, 9), synth_shapes(ShapeKind::contours, 5, 32, 32, 9));
  EXPECT_NE(synth_shapes(ShapeKind::contours, 5, 32, 32, 9), synth_shapes(ShapeKind::contours, 5, 32, 32, 10));
  const auto shapes = synth_shapes(ShapeKind::blobs, 3, 16, 16, 2);
  EXPECT_EQ(synth_shapes(ShapeKind::blobs, 1, 16, 16, 2)[0], shapes[0]);
}

TEST(Dataset, ManifestRoundTripAndRelativePaths) {
  const auto dir = test::scratch_dir("manifest");
  std::filesystem::create_directories(dir / "m");
  write_pbm(dir / "m" / "a.pbm", BinaryImage(3, 4));
  write_pgm(dir / "m" / "a.pgm", GrayImage(3, 4, 256, 9));
  write_manifest(dir / "list.txt", {{"m/a.pbm", "m/a.pgm", "first"}});
  {
    std::ofstream extra(dir / "list.txt", std::ios::app);
    extra << "\n# comment\n";
  }
  const auto entries = read_manifest(dir / "list.txt");
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].name, "first");
  const Dataset d = load_dataset(dir / "list.txt");
  ASSERT_EQ(d.samples.size(), 1u);
  EXPECT_EQ(d.samples[0].observation(2, 3), 9);

  write_pgm(dir / "m" / "b.pgm", GrayImage(4, 4, 256));
  write_manifest(dir / "bad.txt", {{"m/a.pbm", "m/b.pgm", "mismatch"}});
  EXPECT_THROW(load_dataset(dir / "bad.txt"), Error);
  std::ofstream(dir / "short.txt") << "m/a.pbm m/a.pgm\n";
  EXPECT_THROW(read_manifest(dir / "short.txt"), Error);
  EXPECT_THROW(read_manifest(dir / "none.txt"), Error);
}

TEST(Oracle, ZeroModelAndTwoStateClosedForm) {
  const FopModel zero(ModelLayout{2, 4, PatternMode::invariant});
  const OracleResult r = oracle_enumerate(zero, GrayImage(3, 4, 4));
  EXPECT_NEAR(r.log_partition, 12.0 * std::log(2.0), 1e-12);
  for (const double p : r.marginals) EXPECT_NEAR(p, 0.5, 1e-12);

  FopModel one(ModelLayout{1, 2, PatternMode::invariant});
  one.pattern_cost(0, 0);
  one.potentials(0)[static_cast<std::size_t>(canonicalize(1u << 4))] = 0.7;  // isolated on pixel
  one.potentials(0)[0] = -0.2;
  one.data_costs(0)[1] = 0.4;
  const double e1 = 0.7 + 0.4, e0 = -0.2;
  const OracleResult s = oracle_enumerate(one, GrayImage(1, 1, 2, 1));
  EXPECT_NEAR(s.marginals[0], std::exp(-e1) / (std::exp(-e0) + std::exp(-e1)), 1e-12);
  EXPECT_THROW(oracle_enumerate(zero, GrayImage(5, 5, 4)), Error);
}

TEST(Oracle, ExpectedFeaturesAndNll) {
  Rng rng(2);
  const FopModel m = test::random_model({1, 4, PatternMode::invariant}, 1.0, rng);
  const GrayImage y = test::random_gray(2, 3, 4, rng);
  const OracleResult r = oracle_enumerate(m, y, true);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 64; ++s) total += std::exp(-oracle_nll(m, image_from_index(2, 3, s), y));
  EXPECT_NEAR(total, 1.0, 1e-12);
  double windows = 0.0;
  for (int c = 0; c < kSymmetryClassCount; ++c) windows += r.expected_features[static_cast<std::size_t>(c)];
  EXPECT_NEAR(windows, 6.0, 1e-12);
  EXPECT_EQ(image_from_index(2, 3, 0b100001)(1, 2), 1);
  EXPECT_EQ(image_from_index(2, 3, 0b100001)(0, 0), 1);
}

TEST(Inference, ZeroModelGivesHalf) {
  const FopModel zero(ModelLayout{1, 8, PatternMode::invariant});
  InferenceOptions o;
  o.burn_in = 5;
  o.samples = 400;
  const PosteriorMap map = infer_marginals(zero, GrayImage(8, 8, 8), o);
  EXPECT_EQ(map.samples, 400);
  for (const double p : map.probability) EXPECT_NEAR(p, 0.5, 0.12);
  double mean = 0.0;
  for (const double p : map.probability) mean += p / 64.0;
  EXPECT_NEAR(mean, 0.5, 0.02);
}

TEST(Inference, MatchesOracleOnSmallGrid) {
  Rng rng(3);
  const FopModel m = test::random_model({2, 4, PatternMode::invariant}, 0.7, rng);
  const GrayImage y = test::random_gray(3, 4, 4, rng);
  InferenceOptions o;
  o.burn_in = 20;
  o.samples = 20000;
  o.schedule.band_height = 2;
  o.seed = 5;
  const PosteriorMap map = infer_marginals(m, y, o);
  const OracleResult r = oracle_enumerate(m, y);
  for (std::size_t k = 0; k < r.marginals.size(); ++k) EXPECT_NEAR(map.probability[k], r.marginals[k], 0.02);
}

TEST(Inference, SeededRunsAreIdentical) {
  Rng rng(4);
  const FopModel m = test::random_model({2, 4, PatternMode::invariant}, 0.7, rng);
  const GrayImage y = test::random_gray(9, 7, 4, rng);
  InferenceOptions o;
  o.burn_in = 3;
  o.samples = 10;
  o.thin = 2;
  o.seed = 8;
  std::vector<SweepRecord> trace;
  const PosteriorMap a = infer_marginals(m, y, o, nullptr, &trace);
  const PosteriorMap b = infer_marginals(m, y, o);
  EXPECT_EQ(a.probability, b.probability);
  EXPECT_EQ(a.samples, 5);
  EXPECT_EQ(trace.size(), 26u);
  o.seed = 9;
  EXPECT_NE(infer_marginals(m, y, o).probability, a.probability);
}

TEST(Inference, PosteriorImageEncoding) {
  PosteriorMap map{1, 3, {0.0, 0.5, 1.0}, 10};
  const GrayImage g = posterior_to_gray(map);
  EXPECT_EQ(g.levels(), 65536);
  EXPECT_EQ(g(0, 1), 32768);
  EXPECT_EQ(g(0, 2), 65535);
  const PosteriorMap back = posterior_from_gray(g);
  EXPECT_NEAR(back.probability[1], 0.5, 1.0 / 65535);
  std::ostringstream csv;
  write_posterior_csv(csv, map);
  EXPECT_NE(csv.str().find("0.5"), std::string::npos);
  map.probability[0] = 1.5;
  EXPECT_THROW(posterior_to_gray(map), Error);
}

namespace {

std::vector<BinaryImage> truths(int count, std::uint64_t seed) {
  return synth_shapes(ShapeKind::contours, count, 24, 24, seed);
}

}  // namespace

TEST(PrCurve, PerfectPredictor) {
  const auto t = truths(4, 1);
  std::vector<PosteriorMap> preds;
  for (const auto& x : t) preds.push_back(posterior_from_binary(x));
  const auto thresholds = uniform_thresholds();
  ASSERT_EQ(thresholds.size(), 101u);
  const PrCurve c = pr_curve(preds, t, thresholds);
  EXPECT_EQ(c.average_precision, 1.0);
  EXPECT_EQ(c.points[50].threshold, 0.5);
  EXPECT_EQ(c.points[50].precision, 1.0);
  EXPECT_EQ(c.points[50].recall, 1.0);
}

TEST(PrCurve, ConstantPredictor) {
  BinaryImage x(4, 4);
  for (int j = 0; j < 4; ++j) {
    x.set(0, j, true);
    x.set(1, j, true);
  }
  const std::vector<BinaryImage> t{x};
  const std::vector<PosteriorMap> p{PosteriorMap{4, 4, std::vector<double>(16, 0.5), 1}};
  const PrCurve c = pr_curve(p, t, uniform_thresholds());
  for (const auto& pt : c.points) {
    if (pt.threshold <= 0.5) {
      EXPECT_EQ(pt.precision, 0.5);
      EXPECT_EQ(pt.recall, 1.0);
    } else {
      EXPECT_EQ(pt.recall, 0.0);
    }
  }
  EXPECT_NEAR(c.average_precision, 0.5, 1e-12);
}

TEST(PrCurve, OrderInvariantAndBounded) {
  const auto t = truths(6, 2);
  Rng rng(3);
  std::vector<PosteriorMap> preds;
  for (const auto& x : t) {
    PosteriorMap m = posterior_from_binary(x);
    for (double& p : m.probability) p = std::clamp(0.6 * p + 0.4 * rng.uniform(), 0.0, 1.0);
    preds.push_back(m);
  }
  const auto thresholds = uniform_thresholds();
  const PrCurve a = pr_curve(preds, t, thresholds);
  std::vector<PosteriorMap> rp(preds.rbegin(), preds.rend());
  std::vector<BinaryImage> rt(t.rbegin(), t.rend());
  const PrCurve b = pr_curve(rp, rt, thresholds);
  EXPECT_NEAR(a.average_precision, b.average_precision, 1e-12);
  EXPECT_GE(a.average_precision, 0.0);
  EXPECT_LE(a.average_precision, 1.0);
  for (std::size_t k = 1; k < a.points.size(); ++k) EXPECT_LE(a.points[k].recall, a.points[k - 1].recall);
}

TEST(PrCurve, ApFallsAsNoiseGrows) {
  const auto t = truths(8, 4);
  const auto thresholds = uniform_thresholds();
  double previous = 1.0;
  for (const double noise : {0.6, 0.8, 1.0}) {
    Rng rng(5);
    std::vector<PosteriorMap> preds;
    for (const auto& x : t) {
      PosteriorMap m = posterior_from_binary(x);
      for (double& p : m.probability) p = (1.0 - noise) * p + noise * rng.uniform();
      preds.push_back(m);
    }
    const double ap = pr_curve(preds, t, thresholds).average_precision;
    EXPECT_LT(ap, previous);
    previous = ap;
  }
}

TEST(PrCurve, Errors) {
  const auto thresholds = uniform_thresholds();
  EXPECT_THROW(pr_curve({}, {}, thresholds), Error);
  const std::vector<BinaryImage> empty_truth{BinaryImage(2, 2)};
  const std::vector<PosteriorMap> p{PosteriorMap{2, 2, std::vector<double>(4, 0.5), 1}};
  EXPECT_THROW(pr_curve(p, empty_truth, thresholds), Error);
  const std::vector<BinaryImage> wrong{BinaryImage(3, 2)};
  EXPECT_THROW(pr_curve(p, wrong, thresholds), Error);
  EXPECT_THROW(uniform_thresholds(1), Error);
}

TEST(PrCurve, CsvLayout) {
  const auto t = truths(1, 6);
  const std::vector<PosteriorMap> p{posterior_from_binary(t[0])};
  std::ostringstream out;
  write_pr_csv(out, pr_curve(p, t, uniform_thresholds(3)));
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "threshold,precision,recall");
  EXPECT_EQ(lines[2], "0.5,1,1");
  EXPECT_EQ(lines[4], "AP,1");
}

TEST(RawBaseline, DarkerIsMoreLikelyOn) {
  GrayImage y(1, 3, 256, std::vector<int>{0, 100, 255});
  const PosteriorMap s = raw_observation_score(y, 150.0, 100.0);
  EXPECT_EQ(s.probability[0], 1.0);
  EXPECT_EQ(s.probability[2], 0.0);
  EXPECT_GT(s.probability[1], s.probability[2]);
}
