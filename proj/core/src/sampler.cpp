#include "fop/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "fop/error.hpp"

namespace fop {

MhStats mh_band_step(Chain& chain, const CompiledModel& p, const CompiledModel& q, const GrayPyramid& py,
                     const Band& band, int proposals, const BandOptions& options) {
  if (proposals < 1) throw_invalid("need at least one proposal per band");
  if (p.scales() > chain.scales()) throw_invalid("target model has more scales than the chain");

  const ForwardTable table = band_forward(q, py.level(0), chain.image(), band, options);
  // The band table scores every term of the single-scale q that involves a
  // band pixel, so q's energy differences come from it directly. When p is q
  // no pyramid evaluation is needed at all.
  const bool same = &p == &q;
  std::vector<std::uint32_t> current = read_band(chain.image(), band);
  double current_q = table.energy(current);
  std::vector<Pixel> flips;

  MhStats stats;
  for (int n = 0; n < proposals; ++n) {
    ++stats.proposals;
    // The table only depends on pixels outside the band, which accepted
    // proposals never touch, so it stays valid for every draw.
    auto states = table.sample(chain.rng());
    band_differences(chain.image(), band, states, flips);
    if (flips.empty()) {
      ++stats.accepted;
      continue;
    }
    auto& state = chain.pyramid_state();
    const double proposed_q = table.energy(states);
    const double delta_q = proposed_q - current_q;
    if (same) {
      for (const Pixel& f : flips) state.flip(f.row, f.col);
      chain.add_energy(delta_q);
      ++stats.accepted;
      current = std::move(states);
      current_q = proposed_q;
      continue;
    }
    state.begin();
    const double delta_p = chain.evaluator().apply(state, py, flips, p);
    const double log_ratio = delta_q - delta_p;
    const bool accept = log_ratio >= 0.0 || chain.rng().uniform() < std::exp(log_ratio);
    if (accept) {
      state.commit();
      chain.add_energy(delta_p);
      ++stats.accepted;
      current = std::move(states);
      current_q = proposed_q;
    } else {
      state.rollback();
    }
  }
  return stats;
}

std::vector<int> band_starts(int extent, int height, int stride) {
  if (height < 1 || stride < 1) throw_invalid("band height and stride must be positive");
  height = std::min(height, extent);
  std::vector<int> starts;
  for (int s = 0; s + height < extent; s += stride) starts.push_back(s);
  if (starts.empty() || starts.back() != extent - height) starts.push_back(extent - height);
  return starts;
}

SweepStats sweep(Chain& chain, const CompiledModel& p, const CompiledModel& q, const GrayPyramid& py,
                 const Schedule& schedule, const BandOptions& options) {
  SweepStats stats;
  const BinaryImage& x = chain.image();
  const int stride = schedule.effective_stride();

  const int h_rows = std::min(schedule.band_height, x.rows());
  for (const int start : band_starts(x.rows(), h_rows, stride)) {
    stats.horizontal += mh_band_step(chain, p, q, py, Band{Axis::horizontal, start, h_rows}, schedule.proposals,
                                     options);
  }
  stats.energy_after_horizontal = chain.energy();

  const int h_cols = std::min(schedule.band_height, x.cols());
  for (const int start : band_starts(x.cols(), h_cols, stride)) {
    stats.vertical += mh_band_step(chain, p, q, py, Band{Axis::vertical, start, h_cols}, schedule.proposals,
                                   options);
  }
  stats.energy_after_vertical = chain.energy();
  chain.count_sweep();
  return stats;
}

void append_records(std::vector<SweepRecord>& out, std::int64_t sweep_index, const SweepStats& stats) {
  out.push_back({sweep_index, Axis::horizontal, stats.horizontal.rate(), stats.energy_after_horizontal});
  out.push_back({sweep_index, Axis::vertical, stats.vertical.rate(), stats.energy_after_vertical});
}

void write_sampler_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "sweep,band_axis,accept_rate,energy\n";
  for (const auto& r : records) {
    out << r.sweep << ',' << (r.axis == Axis::horizontal ? "horizontal" : "vertical") << ',' << r.accept_rate
        << ',' << r.energy << '\n';
  }
}

BinaryImage sample_prior(const FopModel& model, int rows, int cols, int sweeps, std::uint64_t seed,
                         const Schedule& schedule, std::vector<SweepRecord>* trace) {
  const FopModel prior = model.without_data_term();
  const CompiledModel p(prior);
  const CompiledModel q(prior.level0_slice());
  const GrayPyramid py = build_pyramid(GrayImage(rows, cols, prior.levels()), prior.scales());

  Chain chain(BinaryImage(rows, cols), prior.scales(), seed);
  chain.set_energy(energy_fop(prior, chain.pyramid()));
  for (int s = 0; s < sweeps; ++s) {
    const auto stats = sweep(chain, p, prior.scales() == 1 ? p : q, py, schedule);
    if (trace) append_records(*trace, chain.sweeps(), stats);
  }
  return chain.image();
}

}  // namespace fop
