#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fop/dataset.hpp"
#include "fop/error.hpp"
#include "fop/evaluation.hpp"
#include "fop/inference.hpp"
#include "fop/learner.hpp"
#include "fop/model_io.hpp"
#include "fop/netpbm.hpp"
#include "fop/oracle.hpp"
#include "fop/parallel.hpp"
#include "fop/pyramid.hpp"
#include "fop/sampler.hpp"
#include "fop/synth.hpp"
#include "metadata.hpp"

namespace fop::cli {
namespace {

namespace fs = std::filesystem;

// Observation noise streams are kept apart from the shape streams.
constexpr std::uint64_t kObservationStream = 0x6f62736572766531ULL;

struct Common {
  std::uint64_t seed = 0;
  int jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (overrides FOP_SEED)");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_schedule(CLI::App* cmd, Schedule& s) {
  cmd->add_option("--band-height,-H", s.band_height, "Band height h")->check(CLI::Range(1, 8));
  cmd->add_option("--proposals,-P", s.proposals, "Proposals per band")->check(CLI::PositiveNumber);
  cmd->add_option("--stride", s.stride, "Band stride (0 = ceil(h/2))")->check(CLI::NonNegativeNumber);
}

nlohmann::ordered_json schedule_json(const Schedule& s) {
  return {{"band_height", s.band_height}, {"proposals", s.proposals}, {"stride", s.effective_stride()}};
}

std::string stem_name(int i) {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << i;
  return os.str();
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_data("cannot create " + path.string());
  body(out);
  if (!out) throw_data("write failed: " + path.string());
}

// ---- coarsen ----

struct CoarsenArgs {
  std::string input;
  int scales = 4;
  std::string out_dir;
};

int cmd_coarsen(const CoarsenArgs& a, RunMetadata& meta, std::ostream& out) {
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  if (is_pbm_file(a.input)) {
    const BinaryPyramid p = build_pyramid(read_pbm(fs::path(a.input)), a.scales);
    for (int k = 0; k < p.scales(); ++k) {
      write_pbm(dir / ("level_" + std::to_string(k) + ".pbm"), p.level(k));
      out << "level " << k << ": " << p.level(k).rows() << "x" << p.level(k).cols() << '\n';
    }
  } else {
    const GrayPyramid p = build_pyramid(read_pgm(fs::path(a.input)), a.scales);
    for (int k = 0; k < p.scales(); ++k) {
      write_pgm(dir / ("level_" + std::to_string(k) + ".pgm"), p.level(k));
      out << "level " << k << ": " << p.level(k).rows() << "x" << p.level(k).cols() << '\n';
    }
  }
  meta.config = {{"input", a.input}, {"scales", a.scales}};
  meta.output_dir = dir;
  return kOk;
}

// ---- synth ----

struct SynthArgs {
  std::string preset = "contour";
  std::string kind;
  int count = 30;
  int size = 64;
  int rows = 0;
  int cols = 0;
  std::optional<double> mu0;
  std::optional<double> mu1;
  std::optional<double> sigma;
  int levels = 256;
  std::string out_dir;
};

int cmd_synth(const SynthArgs& a, const Common& c, RunMetadata& meta, std::ostream& out) {
  ObservationModel obs = a.preset == "leaf" ? ObservationModel::leaf() : ObservationModel::contour();
  std::string kind = a.kind.empty() ? (a.preset == "leaf" ? "blobs" : "contours") : a.kind;
  if (a.mu0) obs.mu_off = *a.mu0;
  if (a.mu1) obs.mu_on = *a.mu1;
  if (a.sigma) obs.sigma = *a.sigma;
  obs.levels = a.levels;
  if (obs.sigma < 0.0) throw_invalid("sigma must be non-negative");
  if (obs.levels < 2) throw_invalid("levels must be at least 2");
  const int rows = a.rows > 0 ? a.rows : a.size;
  const int cols = a.cols > 0 ? a.cols : a.size;

  const auto masks = synth_shapes(kind == "blobs" ? ShapeKind::blobs : ShapeKind::contours, a.count, rows, cols, c.seed);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir / "masks");
  fs::create_directories(dir / "observations");
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < a.count; ++i) {
    const std::string name = stem_name(i);
    const GrayImage y = synth_observe(masks[static_cast<std::size_t>(i)], obs,
                                      split_seed(split_seed(c.seed, kObservationStream), static_cast<std::uint64_t>(i)));
    write_pbm(dir / "masks" / (name + ".pbm"), masks[static_cast<std::size_t>(i)]);
    write_pgm(dir / "observations" / (name + ".pgm"), y);
    entries.push_back({fs::path("masks") / (name + ".pbm"), fs::path("observations") / (name + ".pgm"), name});
  }
  write_manifest(dir / "manifest.txt", entries);
  out << "wrote " << a.count << " " << kind << " images to " << dir.string() << '\n';

  meta.config = {{"preset", a.preset}, {"kind", kind}, {"count", a.count}, {"rows", rows}, {"cols", cols},
                 {"mu0", obs.mu_off}, {"mu1", obs.mu_on}, {"sigma", obs.sigma}, {"levels", obs.levels}};
  meta.output_dir = dir;
  return kOk;
}

// ---- train ----

struct TrainArgs {
  std::string manifest;
  int scales = 1;
  int levels = kDefaultGrayLevels;
  bool raw = false;
  TrainConfig cfg;
  std::string proposal;
  std::string init;
  bool init_data = false;
  double data_bandwidth = 8.0;
  bool exact = false;
  std::string resume;
  int checkpoint_every = 0;
  std::string out_dir;
};

int cmd_train(TrainArgs a, const Common& c, RunMetadata& meta, std::ostream& out) {
  a.cfg.seed = c.seed;
  a.cfg.jobs = c.jobs;
  a.cfg.validate();
  const Dataset data = load_dataset(a.manifest);
  const ModelLayout layout{a.scales, a.levels, a.raw ? PatternMode::raw : PatternMode::invariant};
  layout.validate();
  for (const auto& s : data.samples) {
    if (s.observation.levels() > layout.levels) {
      throw_data("'" + s.name + "' has " + std::to_string(s.observation.levels()) + " gray levels; model has " +
                 std::to_string(layout.levels));
    }
    if (layout.scales > max_scales(s.mask.rows(), s.mask.cols())) {
      throw_invalid("K too large for image '" + s.name + "'");
    }
  }

  FopModel initial(layout);
  if (a.init_data) init_data_costs(initial, data.samples, a.data_bandwidth);
  if (!a.init.empty()) {
    const FopModel base = load_model(a.init, layout.mode);
    if (base.levels() != layout.levels) throw_data("initial model has a different number of gray levels");
    FopModel resized = base.resized(layout.scales);
    for (int k = base.scales(); a.init_data && k < layout.scales; ++k) {
      const auto from = initial.data_costs(k);
      std::copy(from.begin(), from.end(), resized.data_costs(k).begin());
    }
    initial = std::move(resized);
  }
  initial.set_lambda(a.cfg.lambda);

  std::optional<FopModel> proposal;
  if (!a.proposal.empty()) {
    proposal = load_model(a.proposal, layout.mode);
    if (proposal->scales() != 1) proposal = proposal->level0_slice();
    if (proposal->levels() != layout.levels) throw_data("proposal model has a different number of gray levels");
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  FopModel result;
  std::vector<TraceRow> trace;

  if (a.exact) {
    auto r = train(data.samples, initial, a.cfg, TrainMode::exact);
    result = std::move(r.model);
    trace = std::move(r.trace);
  } else {
    const TrainingSet set = prepare_training_set(data.samples, layout);
    TrainState state = a.resume.empty() ? init_train_state(initial, set) : load_checkpoint(a.resume, set);
    if (state.model.layout() != layout) throw_data("checkpoint layout does not match the requested model");
    const FopModel* q = proposal ? &*proposal : nullptr;
    while (state.step < a.cfg.steps) {
      sgd_step(state, set, a.cfg, q);
      if (a.checkpoint_every > 0 && state.step % a.checkpoint_every == 0) save_checkpoint(dir / "checkpoint", state);
    }
    result = final_model(state, a.cfg);
    trace = std::move(state.trace);
  }
  result.set_lambda(a.cfg.lambda);

  save_model(dir / "model.txt", result);
  write_text(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, trace); });
  if (!trace.empty()) {
    out << "steps " << a.cfg.steps << ", final objective estimate " << trace.back().objective
        << ", accept rate " << trace.back().accept_rate << '\n';
  }
  out << "model written to " << (dir / "model.txt").string() << '\n';

  meta.model_hash = model_hash(result);
  meta.config = {{"manifest", a.manifest},
                 {"scales", layout.scales},
                 {"levels", layout.levels},
                 {"mode", a.raw ? "raw" : "invariant"},
                 {"lambda", a.cfg.lambda},
                 {"eta", a.cfg.learning_rate},
                 {"steps", a.cfg.steps},
                 {"sweeps_per_step", a.cfg.sweeps_per_step},
                 {"schedule", schedule_json(a.cfg.schedule)},
                 {"decay_fraction", a.cfg.decay_fraction},
                 {"decay_factor", a.cfg.decay_factor},
                 {"polyak", a.cfg.polyak},
                 {"batch_size", a.cfg.batch_size},
                 {"exact", a.exact},
                 {"proposal", a.proposal},
                 {"init", a.init},
                 {"init_data", a.init_data},
                 {"data_bandwidth", a.data_bandwidth},
                 {"resume", a.resume},
                 {"jobs", c.jobs}};
  return kOk;
}

// ---- infer ----

struct InferArgs {
  std::string model;
  std::string manifest;
  std::string image;
  InferenceOptions opts;
  std::string proposal;
  bool csv = false;
  bool trace = false;
  bool grid_test = false;
  double grid_tolerance = 0.01;
  std::string out_dir;
};

int cmd_infer(InferArgs a, const Common& c, RunMetadata& meta, std::ostream& out) {
  if (a.manifest.empty() == a.image.empty()) throw_invalid("give exactly one of --manifest or --image");
  const FopModel model = load_model(a.model);
  std::optional<FopModel> proposal;
  if (!a.proposal.empty()) {
    proposal = load_model(a.proposal, model.mode());
    if (proposal->scales() != 1) proposal = proposal->level0_slice();
  }

  std::vector<std::pair<std::string, GrayImage>> inputs;
  if (!a.manifest.empty()) {
    for (auto& s : load_dataset(a.manifest).samples) inputs.emplace_back(s.name, std::move(s.observation));
  } else {
    inputs.emplace_back(fs::path(a.image).stem().string(), read_pgm(fs::path(a.image)));
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  std::vector<PosteriorMap> maps(inputs.size());
  std::vector<std::vector<SweepRecord>> traces(inputs.size());
  parallel_for(inputs.size(), c.jobs, [&](std::size_t i) {
    InferenceOptions o = a.opts;
    o.seed = split_seed(c.seed, i);
    maps[i] = infer_marginals(model, inputs[i].second, o, proposal ? &*proposal : nullptr,
                              a.trace ? &traces[i] : nullptr);
  });

  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string& name = inputs[i].first;
    write_pgm(dir / (name + ".pgm"), posterior_to_gray(maps[i]));
    if (a.csv) write_text(dir / (name + ".csv"), [&](std::ostream& os) { write_posterior_csv(os, maps[i]); });
    if (a.trace) write_text(dir / (name + "_sampler.csv"), [&](std::ostream& os) { write_sampler_csv(os, traces[i]); });
    if (a.grid_test) {
      const OracleResult oracle = oracle_enumerate(model, inputs[i].second);
      double err = 0.0;
      for (std::size_t p = 0; p < oracle.marginals.size(); ++p) {
        err = std::max(err, std::abs(oracle.marginals[p] - maps[i].probability[p]));
      }
      out << "grid-test " << name << " max_abs_error " << err << '\n';
      worst = std::max(worst, err);
    }
  }
  out << "wrote " << inputs.size() << " posterior maps to " << dir.string() << '\n';

  meta.model_hash = model_hash(model);
  meta.config = {{"model", a.model},
                 {"manifest", a.manifest},
                 {"image", a.image},
                 {"burn_in", a.opts.burn_in},
                 {"samples", a.opts.samples},
                 {"thin", a.opts.thin},
                 {"schedule", schedule_json(a.opts.schedule)},
                 {"proposal", a.proposal},
                 {"jobs", c.jobs}};
  if (a.grid_test) meta.config["grid_test_max_abs_error"] = worst;
  if (a.grid_test && worst > a.grid_tolerance) {
    throw_numerical("grid test failed: max abs error " + std::to_string(worst));
  }
  return kOk;
}

// ---- eval ----

struct EvalArgs {
  std::string manifest;
  std::vector<std::string> posterior_dirs;
  bool raw_baseline = false;
  double mu0 = 150.0;
  double mu1 = 100.0;
  int thresholds = 101;
  std::string out;
};

int cmd_eval(const EvalArgs& a, RunMetadata& meta, std::ostream& out) {
  if (a.posterior_dirs.empty() && !a.raw_baseline) throw_invalid("nothing to evaluate");
  if (a.thresholds < 2) throw_invalid("need at least 2 thresholds");
  const Dataset data = load_dataset(a.manifest);
  std::vector<BinaryImage> truths;
  for (const auto& s : data.samples) truths.push_back(s.mask);
  const auto thresholds = uniform_thresholds(a.thresholds);

  std::vector<std::pair<std::string, std::vector<PosteriorMap>>> sources;
  for (const auto& d : a.posterior_dirs) {
    std::vector<PosteriorMap> maps;
    for (const auto& s : data.samples) maps.push_back(posterior_from_gray(read_pgm(fs::path(d) / (s.name + ".pgm"))));
    std::string label = fs::path(d).filename().string();
    if (label.empty()) label = fs::path(d).parent_path().filename().string();
    sources.emplace_back(label, std::move(maps));
  }
  if (a.raw_baseline) {
    std::vector<PosteriorMap> maps;
    for (const auto& s : data.samples) maps.push_back(raw_observation_score(s.observation, a.mu0, a.mu1));
    sources.emplace_back("raw", std::move(maps));
  }

  const fs::path target(a.out);
  const bool single_file = sources.size() == 1 && target.extension() == ".csv";
  const fs::path dir = single_file ? (target.has_parent_path() ? target.parent_path() : fs::path(".")) : target;
  fs::create_directories(dir);
  nlohmann::ordered_json aps = nlohmann::ordered_json::object();
  for (const auto& [label, maps] : sources) {
    const PrCurve curve = pr_curve(maps, truths, thresholds);
    const fs::path path = single_file ? target : dir / (label + ".csv");
    write_text(path, [&](std::ostream& os) { write_pr_csv(os, curve); });
    out << label << " AP " << std::setprecision(6) << curve.average_precision << '\n';
    aps[label] = curve.average_precision;
  }

  meta.config = {{"manifest", a.manifest}, {"posterior_dirs", a.posterior_dirs}, {"raw_baseline", a.raw_baseline},
                 {"mu0", a.mu0}, {"mu1", a.mu1}, {"thresholds", a.thresholds}, {"average_precision", aps}};
  meta.output_dir = dir;
  return kOk;
}

// ---- sample-prior ----

struct PriorArgs {
  std::string model;
  int size = 64;
  int rows = 0;
  int cols = 0;
  int sweeps = 100;
  Schedule schedule;
  std::string trace;
  std::string out;
};

int cmd_sample_prior(const PriorArgs& a, const Common& c, RunMetadata& meta, std::ostream& out) {
  const FopModel model = load_model(a.model);
  const int rows = a.rows > 0 ? a.rows : a.size;
  const int cols = a.cols > 0 ? a.cols : a.size;
  std::vector<SweepRecord> trace;
  const BinaryImage x = sample_prior(model, rows, cols, a.sweeps, c.seed, a.schedule, a.trace.empty() ? nullptr : &trace);
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_pbm(path, x);
  if (!a.trace.empty()) write_text(a.trace, [&](std::ostream& os) { write_sampler_csv(os, trace); });
  out << "density " << static_cast<double>(x.count_on()) / static_cast<double>(x.size()) << '\n';

  meta.model_hash = model_hash(model);
  meta.config = {{"model", a.model}, {"rows", rows}, {"cols", cols}, {"sweeps", a.sweeps},
                 {"schedule", schedule_json(a.schedule)}};
  meta.output_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return kOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return kUsage;
    case ErrorKind::data: return kDataError;
    case ErrorKind::numerical: return kNumerical;
  }
  return kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale Fields-of-Patterns models for binary images"};
  app.name(args.empty() ? "fop" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  common.jobs = default_jobs();
  if (const char* env = std::getenv("FOP_SEED")) {
    try {
      std::size_t used = 0;
      common.seed = std::stoull(env, &used, 0);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      err << "FOP_SEED is not an unsigned integer: " << env << '\n';
      return kUsage;
    }
  }

  CoarsenArgs coarsen;
  auto* c_coarsen = app.add_subcommand("coarsen", "Write the image pyramid of a PBM or PGM");
  c_coarsen->add_option("--input,-i", coarsen.input, "Input PBM/PGM")->required();
  c_coarsen->add_option("--scales,-K", coarsen.scales, "Number of levels")->check(CLI::PositiveNumber);
  c_coarsen->add_option("--out-dir,-o", coarsen.out_dir, "Output directory")->required();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic dataset and manifest");
  c_synth->add_option("--preset", synth.preset, "Observation preset")->check(CLI::IsMember({"contour", "leaf"}));
  c_synth->add_option("--kind", synth.kind, "Shape kind (default from preset)")
      ->check(CLI::IsMember({"contours", "blobs"}));
  c_synth->add_option("--count,-n", synth.count, "Number of images")->check(CLI::PositiveNumber);
  c_synth->add_option("--size", synth.size, "Square image size")->check(CLI::PositiveNumber);
  c_synth->add_option("--rows", synth.rows, "Rows (overrides --size)")->check(CLI::NonNegativeNumber);
  c_synth->add_option("--cols", synth.cols, "Columns (overrides --size)")->check(CLI::NonNegativeNumber);
  c_synth->add_option("--mu0", synth.mu0, "Mean gray level of off pixels");
  c_synth->add_option("--mu1", synth.mu1, "Mean gray level of on pixels");
  c_synth->add_option("--sigma", synth.sigma, "Observation noise standard deviation");
  c_synth->add_option("--levels", synth.levels, "Gray levels M");
  c_synth->add_option("--out-dir,-o", synth.out_dir, "Output directory")->required();
  add_common(c_synth, common);

  TrainArgs train_args;
  train_args.cfg.steps = 1000;
  auto* c_train = app.add_subcommand("train", "Fit a model by stochastic or exact gradient descent");
  c_train->add_option("--manifest,-m", train_args.manifest, "Training manifest")->required();
  c_train->add_option("--scales,-K", train_args.scales, "Number of scales")->check(CLI::PositiveNumber);
  c_train->add_option("--levels", train_args.levels, "Gray levels M")->check(CLI::Range(2, 65536));
  c_train->add_flag("--raw-patterns", train_args.raw, "One cost per window code instead of per symmetry class");
  add_schedule(c_train, train_args.cfg.schedule);
  c_train->add_option("--lambda", train_args.cfg.lambda, "L2 regularization weight");
  c_train->add_option("--eta", train_args.cfg.learning_rate, "Learning rate");
  c_train->add_option("--steps", train_args.cfg.steps, "Gradient steps")->check(CLI::NonNegativeNumber);
  c_train->add_option("--sweeps-per-step", train_args.cfg.sweeps_per_step, "Chain sweeps per step")
      ->check(CLI::PositiveNumber);
  c_train->add_option("--decay-fraction", train_args.cfg.decay_fraction, "Fraction of steps before decay");
  c_train->add_option("--decay-factor", train_args.cfg.decay_factor, "Learning rate multiplier after decay");
  c_train->add_flag("--polyak", train_args.cfg.polyak, "Average weights over the last 25% of steps");
  c_train->add_option("--batch-size", train_args.cfg.batch_size, "Examples per step (0 = all)");
  c_train->add_option("--proposal-model", train_args.proposal, "Single-scale proposal model");
  c_train->add_option("--init-model", train_args.init, "Start from this model (extra scales start at zero, or from --init-data)");
  c_train->add_flag("--init-data", train_args.init_data,
                    "Start data costs at the smoothed log-likelihood ratio of the training pairs");
  c_train->add_option("--data-bandwidth", train_args.data_bandwidth, "Gray-level smoothing for --init-data")
      ->check(CLI::NonNegativeNumber);
  c_train->add_flag("--exact", train_args.exact, "Exact gradient descent by enumeration (tiny images)");
  c_train->add_option("--resume", train_args.resume, "Checkpoint directory to resume from");
  c_train->add_option("--checkpoint-every", train_args.checkpoint_every, "Checkpoint period in steps (0 = never)");
  c_train->add_option("--out-dir,-o", train_args.out_dir, "Output directory")->required();
  add_common(c_train, common);

  InferArgs infer_args;
  auto* c_infer = app.add_subcommand("infer", "Estimate posterior marginals");
  c_infer->add_option("--model", infer_args.model, "Model file")->required();
  c_infer->add_option("--manifest,-m", infer_args.manifest, "Manifest of observations");
  c_infer->add_option("--image", infer_args.image, "Single observation PGM");
  c_infer->add_option("--burn-in", infer_args.opts.burn_in, "Burn-in sweeps")->check(CLI::NonNegativeNumber);
  c_infer->add_option("--sweeps", infer_args.opts.samples, "Sampling sweeps")->check(CLI::PositiveNumber);
  c_infer->add_option("--thin", infer_args.opts.thin, "Keep every n-th sweep")->check(CLI::PositiveNumber);
  add_schedule(c_infer, infer_args.opts.schedule);
  c_infer->add_option("--proposal-model", infer_args.proposal, "Single-scale proposal model");
  c_infer->add_flag("--csv", infer_args.csv, "Also write posterior CSVs");
  c_infer->add_flag("--trace", infer_args.trace, "Write sampler diagnostics");
  c_infer->add_flag("--grid-test", infer_args.grid_test)->group("");
  c_infer->add_option("--grid-tolerance", infer_args.grid_tolerance)->group("");
  c_infer->add_option("--out-dir,-o", infer_args.out_dir, "Output directory")->required();
  add_common(c_infer, common);

  EvalArgs eval_args;
  auto* c_eval = app.add_subcommand("eval", "Precision-recall curves and AP");
  c_eval->add_option("--manifest,-m", eval_args.manifest, "Ground-truth manifest")->required();
  c_eval->add_option("--posterior-dir,-p", eval_args.posterior_dirs, "Directories of posterior PGMs");
  c_eval->add_flag("--raw-baseline", eval_args.raw_baseline, "Also score thresholded raw observations");
  c_eval->add_option("--mu0", eval_args.mu0, "Off-pixel mean for the raw baseline");
  c_eval->add_option("--mu1", eval_args.mu1, "On-pixel mean for the raw baseline");
  c_eval->add_option("--thresholds", eval_args.thresholds, "Number of thresholds");
  c_eval->add_option("--out,-o", eval_args.out, "CSV path (one source) or output directory")->required();

  PriorArgs prior;
  auto* c_prior = app.add_subcommand("sample-prior", "Draw an image from the prior of a model");
  c_prior->add_option("--model", prior.model, "Model file")->required();
  c_prior->add_option("--size", prior.size, "Square image size")->check(CLI::PositiveNumber);
  c_prior->add_option("--rows", prior.rows, "Rows (overrides --size)")->check(CLI::NonNegativeNumber);
  c_prior->add_option("--cols", prior.cols, "Columns (overrides --size)")->check(CLI::NonNegativeNumber);
  c_prior->add_option("--sweeps", prior.sweeps, "Sweeps")->check(CLI::NonNegativeNumber);
  add_schedule(c_prior, prior.schedule);
  c_prior->add_option("--trace", prior.trace, "Sampler diagnostics CSV");
  c_prior->add_option("--out,-o", prior.out, "Output PBM")->required();
  add_common(c_prior, common);

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunMetadata meta;
  meta.command_line = args;
  meta.seed = common.seed;
  const Stopwatch watch;
  auto finish = [&](int rc) {
    meta.wall_seconds = watch.seconds();
    if (!meta.output_dir.empty()) meta.write(meta.output_dir);
    return rc;
  };
  try {
    if (*c_coarsen) {
      meta.command = "coarsen";
      return finish(cmd_coarsen(coarsen, meta, out));
    }
    if (*c_synth) {
      meta.command = "synth";
      return finish(cmd_synth(synth, common, meta, out));
    }
    if (*c_train) {
      meta.command = "train";
      meta.output_dir = train_args.out_dir;
      return finish(cmd_train(train_args, common, meta, out));
    }
    if (*c_infer) {
      meta.command = "infer";
      meta.output_dir = infer_args.out_dir;
      try {
        return finish(cmd_infer(infer_args, common, meta, out));
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::numerical) finish(kNumerical);
        throw;
      }
    }
    if (*c_eval) {
      meta.command = "eval";
      return finish(cmd_eval(eval_args, meta, out));
    }
    if (*c_prior) {
      meta.command = "sample-prior";
      return finish(cmd_sample_prior(prior, common, meta, out));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace fop::cli
