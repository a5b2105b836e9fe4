#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fop/chain.hpp"
#include "fop/dataset.hpp"
#include "fop/model.hpp"
#include "fop/sampler.hpp"

namespace fop {

struct TrainConfig {
  double lambda = 1e-3;          // L2 regularization weight
  double learning_rate = 1e-4;   // eta, divided by N when normalize_by_examples
  int steps = 1000;
  int sweeps_per_step = 1;
  Schedule schedule;
  std::uint64_t seed = 0;
  double decay_fraction = 0.75;  // eta is multiplied by decay_factor from this fraction of steps on
  double decay_factor = 0.1;
  bool polyak = false;           // average w over the last 25% of steps
  bool normalize_by_examples = true;
  int batch_size = 0;            // 0 uses every example each step
  int jobs = 1;

  void validate() const;
  double rate_at(std::int64_t step) const noexcept;
};

/// Per-example data prepared once for a model layout.
struct TrainingSet {
  ModelLayout layout;
  std::vector<BinaryImage> masks;
  std::vector<GrayPyramid> observations;
  std::vector<FeatureVector> data_features;  // phi(x_i, y_i)

  std::size_t size() const noexcept { return masks.size(); }
};

TrainingSet prepare_training_set(std::span<const Sample> samples, const ModelLayout& layout);

struct TraceRow {
  std::int64_t step = 0;
  double objective = 0.0;  // lambda/2 |w|^2 + sum_i (E(x_i) - E(x_i')), per example when normalized
  double grad_norm = 0.0;
  double accept_rate = 0.0;
  double wall_ms = 0.0;
};

/// Model under training plus one persistent chain per example.
struct TrainState {
  FopModel model;
  std::vector<Chain> chains;
  std::int64_t step = 0;
  std::vector<TraceRow> trace;
  std::vector<double> polyak_sum;
  std::int64_t polyak_count = 0;
};

/// Sets every scale's data costs to the smoothed log-likelihood ratio
/// D^k(v) = -log(p(v | on) / p(v | off)) measured on the training pairs at
/// that scale. Histograms get one pseudo-count per level and are smoothed
/// with a Gaussian kernel of `bandwidth` gray levels. Pattern costs are left
/// untouched.
void init_data_costs(FopModel& model, std::span<const Sample> data, double bandwidth = 8.0);

/// Chains start at the ground-truth masks.
TrainState init_train_state(const FopModel& initial, const TrainingSet& data);

/// Advances every chain `sweeps_per_step` sweeps under the current model and
/// applies w := w - eta_t * (lambda w + sum_i phi(x_i, y_i) - phi(x_i', y_i)).
/// For multiscale models the band proposals come from `proposal` when given,
/// otherwise from the level-0 slice of the current model.
void sgd_step(TrainState& state, const TrainingSet& data, const TrainConfig& config,
              const FopModel* proposal = nullptr);

/// Exact objective and gradient by enumerating every hidden image of each
/// example (tiny grids only).
double exact_objective(const FopModel& model, std::span<const Sample> data, double lambda);
std::vector<double> exact_gradient(const FopModel& model, std::span<const Sample> data, double lambda);

enum class TrainMode {
  stochastic,  // persistent-chain SGD
  exact,       // full gradient descent with enumerated expectations
};

struct TrainResult {
  FopModel model;
  std::vector<TraceRow> trace;
};

/// Current weights, or their tail average when config.polyak is set.
FopModel final_model(const TrainState& state, const TrainConfig& config);

TrainResult train(std::span<const Sample> data, const FopModel& initial, const TrainConfig& config,
                  TrainMode mode = TrainMode::stochastic, const FopModel* proposal = nullptr);

/// Rows `step,obj_estimate,grad_norm,accept_rate,wall_ms`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

/// Checkpoint directory: model.txt (model format with a step line) and one
/// chain_<i>.pbm per persistent chain, plus polyak.txt holding the running
/// tail sum when averaging has started.
void save_checkpoint(const std::filesystem::path& dir, const TrainState& state);
TrainState load_checkpoint(const std::filesystem::path& dir, const TrainingSet& data);

}  // namespace fop
