#include <benchmark/benchmark.h>

#include "fop/band.hpp"
#include "fop/learner.hpp"
#include "fop/model.hpp"
#include "fop/sampler.hpp"
#include "fop/synth.hpp"
#include "helpers.hpp"

using namespace fop;

namespace {

struct Setup {
  FopModel model;
  BinaryImage x;
  GrayImage y;
};

Setup make(int size, int scales) {
  Rng rng(1);
  Setup s{test::random_model({scales, 256, PatternMode::invariant}, 0.5, rng),
          synth_shapes(ShapeKind::contours, 1, size, size, 2)[0], GrayImage(1, 1, 256)};
  s.y = synth_observe(s.x, ObservationModel::contour(), 3);
  return s;
}

void BM_EnergyTotal(benchmark::State& state) {
  const auto s = make(static_cast<int>(state.range(0)), 4);
  const auto px = build_pyramid(s.x, 4);
  const auto py = build_pyramid(s.y, 4);
  for (auto _ : state) benchmark::DoNotOptimize(energy_total(s.model, px, py));
}
BENCHMARK(BM_EnergyTotal)->Arg(64)->Arg(256);

void BM_DeltaEnergy(benchmark::State& state) {
  const auto s = make(64, 4);
  const auto py = build_pyramid(s.y, 4);
  const CompiledModel c(s.model);
  Chain chain(s.x, 4, 4);
  const std::vector<Pixel> flips{{20, 20}, {20, 21}, {21, 20}};
  for (auto _ : state) {
    auto& ev = chain.evaluator();
    chain.pyramid_state().begin();
    benchmark::DoNotOptimize(ev.apply(chain.pyramid_state(), py, flips, c));
    chain.pyramid_state().rollback();
  }
}
BENCHMARK(BM_DeltaEnergy);

void BM_BandForward(benchmark::State& state) {
  const auto s = make(64, 1);
  const CompiledModel c(s.model);
  const Band band{Axis::horizontal, 10, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(band_forward(c, s.y, s.x, band).log_partition());
}
BENCHMARK(BM_BandForward)->DenseRange(1, 6);

void BM_Sweep(benchmark::State& state) {
  const int scales = static_cast<int>(state.range(0));
  const auto s = make(64, scales);
  const auto py = build_pyramid(s.y, scales);
  const CompiledModel p(s.model), q(s.model.level0_slice());
  Chain chain(s.x, scales, 5);
  for (auto _ : state) benchmark::DoNotOptimize(sweep(chain, p, q, py, Schedule{}));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_SgdStep(benchmark::State& state) {
  const auto masks = synth_shapes(ShapeKind::contours, 4, 64, 64, 6);
  std::vector<Sample> data;
  for (std::size_t i = 0; i < masks.size(); ++i)
    data.push_back({masks[i], synth_observe(masks[i], ObservationModel::contour(), 10 + i), "b"});
  const FopModel m(ModelLayout{4, 256, PatternMode::invariant});
  const TrainingSet set = prepare_training_set(data, m.layout());
  TrainState ts = init_train_state(m, set);
  TrainConfig cfg;
  cfg.steps = 1 << 30;
  cfg.learning_rate = 1e-5;
  for (auto _ : state) sgd_step(ts, set, cfg);
}
BENCHMARK(BM_SgdStep)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
