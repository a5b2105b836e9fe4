#include "fop/learner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>

#include "fop/error.hpp"
#include "fop/model_io.hpp"
#include "fop/netpbm.hpp"
#include "fop/oracle.hpp"
#include "fop/parallel.hpp"

namespace fop {

void TrainConfig::validate() const {
  if (!(lambda >= 0.0)) throw_invalid("lambda must be non-negative");
  if (!(learning_rate > 0.0)) throw_invalid("learning rate must be positive");
  if (steps < 0) throw_invalid("steps must be non-negative");
  if (sweeps_per_step < 1) throw_invalid("sweeps per step must be positive");
  if (batch_size < 0) throw_invalid("batch size must be non-negative");
}

double TrainConfig::rate_at(std::int64_t step) const noexcept {
  const bool decayed = static_cast<double>(step) >= decay_fraction * static_cast<double>(steps);
  return decayed ? learning_rate * decay_factor : learning_rate;
}

TrainingSet prepare_training_set(std::span<const Sample> samples, const ModelLayout& layout) {
  if (samples.empty()) throw_invalid("training set is empty");
  TrainingSet set;
  set.layout = layout;
  for (const auto& s : samples) {
    if (s.observation.levels() > layout.levels) {
      throw_data("example '" + s.name + "' has more gray levels than the model");
    }
    set.masks.push_back(s.mask);
    set.observations.push_back(build_pyramid(s.observation, layout.scales));
    set.data_features.push_back(features(layout, build_pyramid(s.mask, layout.scales), set.observations.back()));
  }
  return set;
}

void init_data_costs(FopModel& model, std::span<const Sample> data, double bandwidth) {
  if (data.empty()) throw_invalid("training set is empty");
  if (!(bandwidth >= 0.0)) throw_invalid("bandwidth must be non-negative");
  const int K = model.scales();
  const auto M = static_cast<std::size_t>(model.levels());
  std::vector<std::vector<double>> on(static_cast<std::size_t>(K), std::vector<double>(M, 1.0));
  auto off = on;
  for (const auto& s : data) {
    if (s.observation.levels() > model.levels()) throw_data("example '" + s.name + "' has too many gray levels");
    const BinaryPyramid px = build_pyramid(s.mask, K);
    const GrayPyramid py = build_pyramid(s.observation, K);
    for (int k = 0; k < K; ++k) {
      const auto bits = px.level(k).bits();
      const auto values = py.level(k).pixels();
      for (std::size_t p = 0; p < bits.size(); ++p) {
        (bits[p] ? on : off)[static_cast<std::size_t>(k)][static_cast<std::size_t>(values[p])] += 1.0;
      }
    }
  }

  const int radius = static_cast<int>(std::ceil(3.0 * bandwidth));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1), 1.0);
  for (int d = -radius; d <= radius && bandwidth > 0.0; ++d) {
    kernel[static_cast<std::size_t>(d + radius)] = std::exp(-0.5 * d * d / (bandwidth * bandwidth));
  }
  const auto smooth = [&](const std::vector<double>& h) {
    std::vector<double> out(M, 0.0);
    double total = 0.0;
    for (std::size_t v = 0; v < M; ++v) {
      double sum = 0.0, weight = 0.0;
      for (int d = -radius; d <= radius; ++d) {
        const long u = static_cast<long>(v) + d;
        if (u < 0 || u >= static_cast<long>(M)) continue;
        sum += kernel[static_cast<std::size_t>(d + radius)] * h[static_cast<std::size_t>(u)];
        weight += kernel[static_cast<std::size_t>(d + radius)];
      }
      out[v] = sum / weight;
      total += out[v];
    }
    for (double& v : out) v /= total;
    return out;
  };
  for (int k = 0; k < K; ++k) {
    const auto p_on = smooth(on[static_cast<std::size_t>(k)]);
    const auto p_off = smooth(off[static_cast<std::size_t>(k)]);
    auto d = model.data_costs(k);
    for (std::size_t v = 0; v < M; ++v) d[v] = -std::log(p_on[v] / p_off[v]);
  }
}

TrainState init_train_state(const FopModel& initial, const TrainingSet& data) {
  if (initial.layout() != data.layout) throw_invalid("model layout differs from the training set layout");
  TrainState state;
  state.model = initial;
  for (std::size_t i = 0; i < data.size(); ++i) {
    state.chains.emplace_back(data.masks[i], initial.scales(), 0);
  }
  return state;
}

namespace {

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return s;
}

std::vector<std::size_t> batch_indices(std::size_t n, int batch_size, std::int64_t step) {
  std::vector<std::size_t> idx;
  if (batch_size <= 0 || static_cast<std::size_t>(batch_size) >= n) {
    for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  const std::size_t b = static_cast<std::size_t>(batch_size);
  const std::size_t first = (static_cast<std::size_t>(step) * b) % n;
  for (std::size_t k = 0; k < b; ++k) idx.push_back((first + k) % n);
  return idx;
}

void accumulate_polyak(TrainState& state, const TrainConfig& config) {
  if (!config.polyak) return;
  if (static_cast<double>(state.step) < 0.75 * static_cast<double>(config.steps)) return;
  const auto w = state.model.weights();
  if (state.polyak_sum.empty()) state.polyak_sum.assign(w.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) state.polyak_sum[k] += w[k];
  ++state.polyak_count;
}

}  // namespace

void sgd_step(TrainState& state, const TrainingSet& data, const TrainConfig& config, const FopModel* proposal) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  FopModel& model = state.model;
  model.set_lambda(config.lambda);
  if (state.chains.size() != data.size()) throw_invalid("one chain per training example required");
  if (proposal && (proposal->scales() != 1 || proposal->levels() != model.levels())) {
    throw_invalid("proposal model must be single-scale with the same gray levels");
  }

  const CompiledModel p(model);
  const CompiledModel q(proposal ? *proposal : model.level0_slice());
  const bool exact = model.scales() == 1 && proposal == nullptr;
  const auto batch = batch_indices(data.size(), config.batch_size, state.step);

  std::vector<FeatureVector> sampled(batch.size());
  std::vector<MhStats> stats(batch.size());
  std::vector<double> contrast(batch.size(), 0.0);
  parallel_for(batch.size(), config.jobs, [&](std::size_t b) {
    const std::size_t i = batch[b];
    Chain& chain = state.chains[i];
    const GrayPyramid& py = data.observations[i];
    chain.reseed(split_seed(split_seed(config.seed, i), static_cast<std::uint64_t>(state.step)));
    chain.set_energy(0.0);
    for (int s = 0; s < config.sweeps_per_step; ++s) {
      const auto sw = sweep(chain, p, exact ? p : q, py, config.schedule);
      stats[b] += sw.horizontal;
      stats[b] += sw.vertical;
    }
    sampled[b] = features(data.layout, chain.pyramid(), py);
    contrast[b] = dot(model.weights(), data.data_features[i]) - dot(model.weights(), sampled[b]);
  });

  const auto w = model.weights();
  const double n = static_cast<double>(data.size());
  const double scale = n / static_cast<double>(batch.size());
  std::vector<double> gradient(w.begin(), w.end());
  for (double& g : gradient) g *= config.lambda;
  MhStats total;
  double contrast_sum = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const auto& truth = data.data_features[batch[b]].counts;
    const auto& sample = sampled[b].counts;
    for (std::size_t k = 0; k < gradient.size(); ++k) {
      gradient[k] += scale * static_cast<double>(truth[k] - sample[k]);
    }
    total += stats[b];
    contrast_sum += scale * contrast[b];
  }

  const double norm = config.normalize_by_examples ? n : 1.0;
  const double eta = config.rate_at(state.step) / norm;
  const double objective = 0.5 * config.lambda * squared_norm(w) + contrast_sum;
  for (std::size_t k = 0; k < w.size(); ++k) w[k] -= eta * gradient[k];
  if (!model.all_finite()) {
    throw_numerical("non-finite parameters after step " + std::to_string(state.step) +
                    " (gradient norm " + std::to_string(std::sqrt(squared_norm(gradient))) + ")");
  }

  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  state.trace.push_back({state.step, objective / norm, std::sqrt(squared_norm(gradient)) / norm, total.rate(),
                         elapsed.count()});
  ++state.step;
  accumulate_polyak(state, config);
}

double exact_objective(const FopModel& model, std::span<const Sample> data, double lambda) {
  double objective = 0.5 * lambda * squared_norm(model.weights());
  for (const auto& s : data) objective += oracle_nll(model, s.mask, s.observation);
  return objective;
}

std::vector<double> exact_gradient(const FopModel& model, std::span<const Sample> data, double lambda) {
  const auto w = model.weights();
  std::vector<double> gradient(w.begin(), w.end());
  for (double& g : gradient) g *= lambda;
  for (const auto& s : data) {
    if (s.mask.rows() * s.mask.cols() > 20) throw_invalid("exact gradient limited to 20-pixel images");
    const GrayPyramid py = build_pyramid(s.observation, model.scales());
    const FeatureVector phi = features(model.layout(), build_pyramid(s.mask, model.scales()), py);
    const OracleResult oracle = oracle_enumerate(model, s.observation, true);
    for (std::size_t k = 0; k < gradient.size(); ++k) {
      gradient[k] += static_cast<double>(phi.counts[k]) - oracle.expected_features[k];
    }
  }
  return gradient;
}

FopModel final_model(const TrainState& state, const TrainConfig& config) {
  FopModel model = state.model;
  if (config.polyak && state.polyak_count > 0) {
    auto w = model.weights();
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = state.polyak_sum[k] / static_cast<double>(state.polyak_count);
  }
  return model;
}

TrainResult train(std::span<const Sample> data, const FopModel& initial, const TrainConfig& config, TrainMode mode,
                  const FopModel* proposal) {
  config.validate();
  if (data.empty()) throw_invalid("training set is empty");
  FopModel model = initial;
  model.set_lambda(config.lambda);

  if (mode == TrainMode::exact) {
    TrainResult result{model, {}};
    const double norm = config.normalize_by_examples ? static_cast<double>(data.size()) : 1.0;
    for (std::int64_t step = 0; step < config.steps; ++step) {
      const auto start = std::chrono::steady_clock::now();
      const auto gradient = exact_gradient(result.model, data, config.lambda);
      const double objective = exact_objective(result.model, data, config.lambda);
      const double eta = config.rate_at(step) / norm;
      auto w = result.model.weights();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= eta * gradient[k];
      if (!result.model.all_finite()) throw_numerical("non-finite parameters in exact descent");
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
      result.trace.push_back({step, objective, std::sqrt(squared_norm(gradient)), 1.0, elapsed.count()});
    }
    return result;
  }

  const TrainingSet set = prepare_training_set(data, model.layout());
  TrainState state = init_train_state(model, set);
  for (int step = 0; step < config.steps; ++step) sgd_step(state, set, config, proposal);

  return {final_model(state, config), std::move(state.trace)};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "step,obj_estimate,grad_norm,accept_rate,wall_ms\n";
  out << std::setprecision(10);
  for (const auto& r : trace) {
    out << r.step << ',' << r.objective << ',' << r.grad_norm << ',' << r.accept_rate << ',' << r.wall_ms << '\n';
  }
}

void save_checkpoint(const std::filesystem::path& dir, const TrainState& state) {
  std::filesystem::create_directories(dir);
  save_model(dir / "model.txt", state.model, state.step);
  for (std::size_t i = 0; i < state.chains.size(); ++i) {
    write_pbm(dir / ("chain_" + std::to_string(i) + ".pbm"), state.chains[i].image());
  }
  const auto polyak = dir / "polyak.txt";
  if (state.polyak_count > 0) {
    save_model(polyak, FopModel(state.model.layout(), state.polyak_sum), state.polyak_count);
  } else {
    std::filesystem::remove(polyak);
  }
}

TrainState load_checkpoint(const std::filesystem::path& dir, const TrainingSet& data) {
  ModelFile file = load_model_file(dir / "model.txt");
  if (!file.step) throw_data("checkpoint model has no step line");
  TrainState state = init_train_state(file.model, data);
  state.step = *file.step;
  for (std::size_t i = 0; i < state.chains.size(); ++i) {
    const BinaryImage x = read_pbm(dir / ("chain_" + std::to_string(i) + ".pbm"));
    if (x.rows() != data.masks[i].rows() || x.cols() != data.masks[i].cols()) {
      throw_data("checkpoint chain " + std::to_string(i) + " has the wrong size");
    }
    state.chains[i] = Chain(x, file.model.scales(), 0);
  }
  const auto polyak = dir / "polyak.txt";
  if (std::filesystem::exists(polyak)) {
    ModelFile sums = load_model_file(polyak);
    if (!sums.step || sums.model.layout() != file.model.layout()) throw_data("malformed polyak.txt in checkpoint");
    state.polyak_sum.assign(sums.model.weights().begin(), sums.model.weights().end());
    state.polyak_count = *sums.step;
  }
  return state;
}

}  // namespace fop
