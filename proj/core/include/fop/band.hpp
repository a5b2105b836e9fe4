#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fop/incremental.hpp"
#include "fop/random.hpp"

namespace fop {

enum class Axis : std::uint8_t { horizontal, vertical };

/// A strip of `height` full rows (horizontal) or full columns (vertical)
/// starting at row/column `start`.
struct Band {
  Axis axis = Axis::horizontal;
  int start = 0;
  int height = 1;
};

struct BandOptions {
  int max_height = 8;
};

/// Band-frame coordinates: r indexes rows of the band (0..height-1), j its
/// columns along the band. For vertical bands this is the transposed image.
Pixel band_pixel(const Band& band, int r, int j) noexcept;
/// Number of band columns (image width for horizontal bands, height for vertical).
int band_length(const BinaryImage& x, const Band& band) noexcept;
void check_band(const BinaryImage& x, const Band& band, const BandOptions& options = {});

/// Column states of x inside the band; bit r of state j is pixel (r, j).
std::vector<std::uint32_t> read_band(const BinaryImage& x, const Band& band);
/// Pixels whose value differs between x and the given band configuration.
void band_differences(const BinaryImage& x, const Band& band, std::span<const std::uint32_t> states,
                      std::vector<Pixel>& out);

/// Forward weights of the column chain z_0..z_{m-1} for the exact conditional
/// q(x_B | y, x_rest) of a single-scale model. Every 3x3 window that overlaps
/// the band is a factor of three consecutive columns; pairing adjacent
/// columns turns this into a first-order chain over state pairs.
///
/// Weights are stored per column normalized to a maximum of 1 together with
/// the running log scale, so log alpha_j(a, b) = log(weight) + log_scale(j).
class ForwardTable {
 public:
  const Band& band() const noexcept { return band_; }
  int columns() const noexcept { return columns_; }
  int height() const noexcept { return band_.height; }
  std::uint32_t state_count() const noexcept { return states_; }

  /// log of the sum over band configurations of exp(-E), where E collects
  /// all window terms touching the band and the data terms of band pixels.
  double log_partition() const noexcept { return log_partition_; }

  /// log alpha_j(prev, cur) for j in [0, columns]; -inf where impossible.
  double log_weight(int column, std::uint32_t prev, std::uint32_t cur) const;

  /// Band energy of a configuration (same terms as log_partition).
  double energy(std::span<const std::uint32_t> states) const;
  double log_probability(std::span<const std::uint32_t> states) const {
    return -energy(states) - log_partition_;
  }

  std::vector<std::uint32_t> sample(Rng& rng) const;

 private:
  friend ForwardTable band_forward(const CompiledModel&, const GrayImage&, const BinaryImage&, const Band&,
                                   const BandOptions&);

  double factor(int column, std::uint32_t prev, std::uint32_t cur, std::uint32_t next) const noexcept;
  PatternCode code(int column, int slot, std::uint32_t prev, std::uint32_t cur,
                   std::uint32_t next) const noexcept;

  Band band_;
  int columns_ = 0;
  std::uint32_t states_ = 0;
  std::vector<int> slots_;  // band-relative center rows of windows inside the image
  std::array<double, kPatternCount> cost_{};
  std::array<double, kPatternCount> window_factor_{};
  double min_cost_ = 0.0;
  // Spread 3-bit column slices per (padded column, state, slot).
  std::vector<std::uint16_t> slices_;
  // Window-factor tensors F[prev][cur][next], one per distinct context of a
  // column triple; used when states^3 is small.
  std::vector<double> tensors_;
  std::vector<std::int32_t> tensor_of_column_;
  std::vector<double> data_energy_;  // columns x states
  std::vector<double> data_factor_;  // columns x states
  std::vector<double> alpha_;        // (columns + 1) x states x states
  std::vector<double> log_scale_;    // columns + 1
  double log_partition_ = 0.0;
};

/// Requires a single-scale model. y is the level-0 observation; x supplies
/// the fixed pixels outside the band.
ForwardTable band_forward(const CompiledModel& model, const GrayImage& y, const BinaryImage& x,
                          const Band& band, const BandOptions& options = {});

inline std::vector<std::uint32_t> band_sample(const ForwardTable& table, Rng& rng) { return table.sample(rng); }

}  // namespace fop
