#include "fop/band.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fop/error.hpp"

namespace fop {

Pixel band_pixel(const Band& band, int r, int j) noexcept {
  return band.axis == Axis::horizontal ? Pixel{band.start + r, j} : Pixel{j, band.start + r};
}

int band_length(const BinaryImage& x, const Band& band) noexcept {
  return band.axis == Axis::horizontal ? x.cols() : x.rows();
}

namespace {

int band_extent(const BinaryImage& x, const Band& band) noexcept {
  return band.axis == Axis::horizontal ? x.rows() : x.cols();
}

std::uint16_t spread(unsigned v) noexcept {
  return static_cast<std::uint16_t>((v & 1u) | ((v & 2u) << 2) | ((v & 4u) << 4));
}

// Draws an index with probability proportional to weights[i].
std::uint32_t draw(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (const double w : weights) total += w;
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  std::uint32_t last = 0;
  for (std::uint32_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last = i;
    if (target < cumulative) return i;
  }
  return last;
}

}  // namespace

void check_band(const BinaryImage& x, const Band& band, const BandOptions& options) {
  if (band.height < 1) throw_invalid("band height must be positive");
  if (band.height > options.max_height) {
    throw_invalid("band height " + std::to_string(band.height) + " exceeds the cap of " +
                  std::to_string(options.max_height));
  }
  if (band.height > 20) throw_invalid("band height cannot exceed 20");
  if (band.start < 0 || band.start + band.height > band_extent(x, band)) {
    throw_invalid("band does not fit inside the image");
  }
}

std::vector<std::uint32_t> read_band(const BinaryImage& x, const Band& band) {
  const int length = band_length(x, band);
  std::vector<std::uint32_t> states(static_cast<std::size_t>(length), 0u);
  for (int j = 0; j < length; ++j) {
    for (int r = 0; r < band.height; ++r) {
      const Pixel p = band_pixel(band, r, j);
      if (x(p.row, p.col)) states[static_cast<std::size_t>(j)] |= 1u << r;
    }
  }
  return states;
}

void band_differences(const BinaryImage& x, const Band& band, std::span<const std::uint32_t> states,
                      std::vector<Pixel>& out) {
  out.clear();
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (int r = 0; r < band.height; ++r) {
      const Pixel p = band_pixel(band, r, static_cast<int>(j));
      if (static_cast<std::uint32_t>(x(p.row, p.col)) != (states[j] >> r & 1u)) out.push_back(p);
    }
  }
}

PatternCode ForwardTable::code(int column, int slot, std::uint32_t prev, std::uint32_t cur,
                               std::uint32_t next) const noexcept {
  const std::size_t nslots = slots_.size();
  const auto at = [&](int padded, std::uint32_t state) {
    return slices_[(static_cast<std::size_t>(padded) * states_ + state) * nslots + static_cast<std::size_t>(slot)];
  };
  return static_cast<PatternCode>(at(column, prev) | at(column + 1, cur) << 1 | at(column + 2, next) << 2);
}

double ForwardTable::factor(int column, std::uint32_t prev, std::uint32_t cur, std::uint32_t next) const noexcept {
  double f = data_factor_[static_cast<std::size_t>(column) * states_ + cur];
  if (!tensor_of_column_.empty()) {
    const std::size_t S = states_;
    const std::size_t base = static_cast<std::size_t>(tensor_of_column_[static_cast<std::size_t>(column)]) * S * S * S;
    return f * tensors_[base + (prev * S + cur) * S + next];
  }
  for (int s = 0; s < static_cast<int>(slots_.size()); ++s) f *= window_factor_[code(column, s, prev, cur, next)];
  return f;
}

double ForwardTable::log_weight(int column, std::uint32_t prev, std::uint32_t cur) const {
  if (column < 0 || column > columns_ || prev >= states_ || cur >= states_) {
    throw_invalid("forward weight index out of range");
  }
  const double w = alpha_[(static_cast<std::size_t>(column) * states_ + prev) * states_ + cur];
  return w > 0.0 ? std::log(w) + log_scale_[static_cast<std::size_t>(column)]
                 : -std::numeric_limits<double>::infinity();
}

double ForwardTable::energy(std::span<const std::uint32_t> states) const {
  if (states.size() != static_cast<std::size_t>(columns_)) throw_invalid("band configuration has wrong length");
  double e = 0.0;
  for (int j = 0; j < columns_; ++j) {
    const std::uint32_t prev = j > 0 ? states[static_cast<std::size_t>(j) - 1] : 0u;
    const std::uint32_t cur = states[static_cast<std::size_t>(j)];
    const std::uint32_t next = j + 1 < columns_ ? states[static_cast<std::size_t>(j) + 1] : 0u;
    if (cur >= states_) throw_invalid("column state out of range");
    e += data_energy_[static_cast<std::size_t>(j) * states_ + cur];
    for (int s = 0; s < static_cast<int>(slots_.size()); ++s) e += cost_[code(j, s, prev, cur, next)];
  }
  return e;
}

std::vector<std::uint32_t> ForwardTable::sample(Rng& rng) const {
  const std::size_t S = states_;
  std::vector<std::uint32_t> z(static_cast<std::size_t>(columns_));
  std::vector<double> weights(S);

  const double* last = alpha_.data() + static_cast<std::size_t>(columns_) * S * S;
  for (std::size_t b = 0; b < S; ++b) weights[b] = last[b * S];
  z.back() = draw(weights, rng);

  for (int j = columns_ - 1; j >= 1; --j) {
    const std::uint32_t cur = z[static_cast<std::size_t>(j)];
    const std::uint32_t next = j + 1 < columns_ ? z[static_cast<std::size_t>(j) + 1] : 0u;
    const double* alpha = alpha_.data() + static_cast<std::size_t>(j) * S * S;
    for (std::uint32_t a = 0; a < S; ++a) {
      const double w = alpha[a * S + cur];
      weights[a] = w > 0.0 ? w * factor(j, a, cur, next) : 0.0;
    }
    z[static_cast<std::size_t>(j) - 1] = draw(weights, rng);
  }
  return z;
}

ForwardTable band_forward(const CompiledModel& model, const GrayImage& y, const BinaryImage& x,
                          const Band& band, const BandOptions& options) {
  if (model.scales() != 1) throw_invalid("band sampler requires a single-scale model");
  check_band(x, band, options);
  if (y.rows() != x.rows() || y.cols() != x.cols()) throw_invalid("observation and image sizes differ");
  if (y.levels() > model.levels()) throw_invalid("observation has more gray levels than the model");

  ForwardTable t;
  t.band_ = band;
  t.columns_ = band_length(x, band);
  t.states_ = 1u << band.height;
  const int h = band.height;
  const int W = t.columns_;
  const std::size_t S = t.states_;
  const int extent = band_extent(x, band);

  for (int slot = -1; slot <= h; ++slot) {
    const int row = band.start + slot;
    if (row >= 0 && row < extent) t.slots_.push_back(slot);
  }
  const std::size_t nslots = t.slots_.size();

  // Vertical bands see the image transposed, so costs are looked up through
  // the transposed window code.
  const auto table = model.pattern_table(0);
  for (int c = 0; c < kPatternCount; ++c) {
    const auto image_code = band.axis == Axis::horizontal ? static_cast<PatternCode>(c)
                                                          : transpose_pattern(static_cast<PatternCode>(c));
    t.cost_[static_cast<std::size_t>(c)] = table[image_code];
  }
  t.min_cost_ = *std::min_element(t.cost_.begin(), t.cost_.end());
  for (int c = 0; c < kPatternCount; ++c) {
    t.window_factor_[static_cast<std::size_t>(c)] = std::exp(-(t.cost_[static_cast<std::size_t>(c)] - t.min_cost_));
  }

  const auto context = [&](int r, int j) -> unsigned {
    const Pixel p = band_pixel(band, r, j);
    return x.value_or_zero(p.row, p.col);
  };
  // Fixed rows above and below the band, packed as 4 bits per padded column.
  std::vector<unsigned> ctx4(static_cast<std::size_t>(W + 2), 0u);
  for (int j = 0; j < W; ++j) {
    ctx4[static_cast<std::size_t>(j) + 1] =
        context(-2, j) | context(-1, j) << 1 | context(h, j) << 2 | context(h + 1, j) << 3;
  }
  t.slices_.assign(static_cast<std::size_t>(W + 2) * S * nslots, 0);
  for (int padded = 0; padded < W + 2; ++padded) {
    const unsigned c4 = ctx4[static_cast<std::size_t>(padded)];
    const unsigned ctx = (c4 & 3u) | (c4 >> 2 & 3u) << (h + 2);
    for (std::uint32_t z = 0; z < S; ++z) {
      const unsigned word = ctx | z << 2;
      for (std::size_t s = 0; s < nslots; ++s) {
        t.slices_[(static_cast<std::size_t>(padded) * S + z) * nslots + s] =
            spread((word >> (t.slots_[s] + 1)) & 7u);
      }
    }
  }

  constexpr std::size_t kTensorLimit = 1u << 15;
  if (S * S * S <= kTensorLimit) {
    const std::size_t S3 = S * S * S;
    std::vector<std::int32_t> tensor_of_key(1u << 12, -1);
    std::vector<std::uint16_t> partial(nslots);
    t.tensor_of_column_.assign(static_cast<std::size_t>(W), 0);
    t.tensors_.reserve(std::min<std::size_t>(static_cast<std::size_t>(W), 64) * S3);
    for (int j = 0; j < W; ++j) {
      const auto pj = static_cast<std::size_t>(j);
      const unsigned key = ctx4[pj] | ctx4[pj + 1] << 4 | ctx4[pj + 2] << 8;
      std::int32_t& id = tensor_of_key[key];
      if (id < 0) {
        id = static_cast<std::int32_t>(t.tensors_.size() / S3);
        t.tensors_.resize(t.tensors_.size() + S3);
        double* f = t.tensors_.data() + static_cast<std::size_t>(id) * S3;
        const std::uint16_t* left = t.slices_.data() + pj * S * nslots;
        const std::uint16_t* mid = left + S * nslots;
        const std::uint16_t* right = mid + S * nslots;
        for (std::size_t a = 0; a < S; ++a) {
          for (std::size_t b = 0; b < S; ++b) {
            for (std::size_t s = 0; s < nslots; ++s) {
              partial[s] = static_cast<std::uint16_t>(left[a * nslots + s] | mid[b * nslots + s] << 1);
            }
            double* out = f + (a * S + b) * S;
            for (std::size_t c = 0; c < S; ++c) {
              const std::uint16_t* rc = right + c * nslots;
              double v = 1.0;
              for (std::size_t s = 0; s < nslots; ++s) v *= t.window_factor_[partial[s] | rc[s] << 2];
              out[c] = v;
            }
          }
        }
      }
      t.tensor_of_column_[pj] = id;
    }
  }

  t.data_energy_.assign(static_cast<std::size_t>(W) * S, 0.0);
  t.data_factor_.assign(static_cast<std::size_t>(W) * S, 0.0);
  std::vector<double> data_min(static_cast<std::size_t>(W), 0.0);
  for (int j = 0; j < W; ++j) {
    double* energy = t.data_energy_.data() + static_cast<std::size_t>(j) * S;
    for (std::uint32_t z = 0; z < S; ++z) {
      double e = 0.0;
      for (int r = 0; r < h; ++r) {
        if (!(z >> r & 1u)) continue;
        const Pixel p = band_pixel(band, r, j);
        e += model.data_cost(0, y(p.row, p.col));
      }
      energy[z] = e;
    }
    const double lowest = *std::min_element(energy, energy + S);
    data_min[static_cast<std::size_t>(j)] = lowest;
    for (std::uint32_t z = 0; z < S; ++z) {
      t.data_factor_[static_cast<std::size_t>(j) * S + z] = std::exp(-(energy[z] - lowest));
    }
  }

  t.alpha_.assign(static_cast<std::size_t>(W + 1) * S * S, 0.0);
  t.log_scale_.assign(static_cast<std::size_t>(W + 1), 0.0);
  // The column left of the image is fixed to the all-off state.
  for (std::size_t b = 0; b < S; ++b) t.alpha_[b] = 1.0;

  std::vector<std::uint16_t> partial(nslots);
  const double shift_per_column = static_cast<double>(nslots) * t.min_cost_;
  for (int j = 0; j < W; ++j) {
    const double* alpha = t.alpha_.data() + static_cast<std::size_t>(j) * S * S;
    double* next = t.alpha_.data() + static_cast<std::size_t>(j + 1) * S * S;
    const std::size_t next_states = j + 1 == W ? 1 : S;
    const double* data = t.data_factor_.data() + static_cast<std::size_t>(j) * S;
    if (!t.tensor_of_column_.empty()) {
      const double* f = t.tensors_.data() +
                        static_cast<std::size_t>(t.tensor_of_column_[static_cast<std::size_t>(j)]) * S * S * S;
      for (std::uint32_t a = 0; a < S; ++a) {
        for (std::uint32_t b = 0; b < S; ++b) {
          const double w = alpha[a * S + b];
          if (w == 0.0) continue;
          const double base = w * data[b];
          const double* row = f + (a * S + b) * S;
          double* out = next + b * S;
          for (std::size_t c = 0; c < next_states; ++c) out[c] += base * row[c];
        }
      }
    } else {
      const std::uint16_t* right = t.slices_.data() + static_cast<std::size_t>(j + 2) * S * nslots;
      for (std::uint32_t a = 0; a < S; ++a) {
        for (std::uint32_t b = 0; b < S; ++b) {
          const double w = alpha[a * S + b];
          if (w == 0.0) continue;
          const double base = w * data[b];
          for (std::size_t s = 0; s < nslots; ++s) {
            partial[s] = static_cast<std::uint16_t>(
                t.slices_[(static_cast<std::size_t>(j) * S + a) * nslots + s] |
                t.slices_[(static_cast<std::size_t>(j + 1) * S + b) * nslots + s] << 1);
          }
          for (std::size_t c = 0; c < next_states; ++c) {
            double f = base;
            const std::uint16_t* rc = right + c * nslots;
            for (std::size_t s = 0; s < nslots; ++s) f *= t.window_factor_[partial[s] | rc[s] << 2];
            next[b * S + c] += f;
          }
        }
      }
    }
    const double peak = *std::max_element(next, next + S * S);
    if (!(peak > 0.0) || !std::isfinite(peak)) {
      throw_numerical("band forward pass underflowed at column " + std::to_string(j));
    }
    for (std::size_t e = 0; e < S * S; ++e) next[e] /= peak;
    t.log_scale_[static_cast<std::size_t>(j) + 1] = t.log_scale_[static_cast<std::size_t>(j)] + std::log(peak) -
                                                    shift_per_column - data_min[static_cast<std::size_t>(j)];
  }

  const double* last = t.alpha_.data() + static_cast<std::size_t>(W) * S * S;
  double total = 0.0;
  for (std::size_t b = 0; b < S; ++b) total += last[b * S];
  t.log_partition_ = std::log(total) + t.log_scale_.back();
  return t;
}

}  // namespace fop
