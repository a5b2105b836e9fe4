#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fop/band.hpp"
#include "fop/chain.hpp"

namespace fop {

struct MhStats {
  std::int64_t proposals = 0;
  std::int64_t accepted = 0;

  double rate() const noexcept {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
  MhStats& operator+=(const MhStats& o) noexcept {
    proposals += o.proposals;
    accepted += o.accepted;
    return *this;
  }
};

/// Metropolis-Hastings band update. Builds the forward table of the
/// single-scale proposal model q once, then draws `proposals` candidates for
/// the band, accepting each with min(1, p(x')q(x) / (p(x)q(x'))). Rejected
/// candidates are rolled back exactly. The chain's running energy tracks p.
MhStats mh_band_step(Chain& chain, const CompiledModel& p, const CompiledModel& q, const GrayPyramid& py,
                     const Band& band, int proposals, const BandOptions& options = {});

struct Schedule {
  int band_height = 3;
  int proposals = 8;
  int stride = 0;  // 0 selects ceil(band_height / 2)

  int effective_stride() const noexcept { return stride > 0 ? stride : (band_height + 1) / 2; }
};

/// Start offsets of bands of `height` covering [0, extent) with the given
/// stride; the last band is aligned to the far edge.
std::vector<int> band_starts(int extent, int height, int stride);

struct SweepStats {
  MhStats horizontal;
  MhStats vertical;
  double energy_after_horizontal = 0.0;
  double energy_after_vertical = 0.0;
};

/// One pass of horizontal bands top to bottom, then vertical bands left to right.
SweepStats sweep(Chain& chain, const CompiledModel& p, const CompiledModel& q, const GrayPyramid& py,
                 const Schedule& schedule, const BandOptions& options = {});

/// Diagnostics rows `sweep,band_axis,accept_rate,energy`.
struct SweepRecord {
  std::int64_t sweep = 0;
  Axis axis = Axis::horizontal;
  double accept_rate = 0.0;
  double energy = 0.0;
};

void append_records(std::vector<SweepRecord>& out, std::int64_t sweep_index, const SweepStats& stats);
void write_sampler_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// Runs the band chain on the prior energy alone (data costs ignored),
/// starting from the all-off image.
BinaryImage sample_prior(const FopModel& model, int rows, int cols, int sweeps, std::uint64_t seed,
                         const Schedule& schedule = {}, std::vector<SweepRecord>* trace = nullptr);

}  // namespace fop
