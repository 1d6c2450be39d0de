#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sstack/dsp.hpp"

namespace sstack {

struct GridSpec {
  enum class Mode { Explicit, FromMinResolution };

  Mode mode = Mode::Explicit;
  std::size_t height = 256;
  std::size_t width = 128;

  static GridSpec explicit_grid(std::size_t height, std::size_t width) {
    return {Mode::Explicit, height, width};
  }
  static GridSpec from_min_resolution() { return {Mode::FromMinResolution, 0, 0}; }
};

struct StackParams {
  std::vector<StftParams> channels;
  double f_lo = 10.0;
  double f_hi = 1000.0;
  GridSpec grid;

  // Windows {256, 2048, 16384}, Hann, hop = window/4, band [10, 1000] Hz, 256x128 grid.
  static StackParams defaults();

  void validate() const;
};

// k x H x W channel stack on a shared grid. Channel-major, then frequency row,
// then time column.
struct StackedTensor {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;
  std::vector<double> freq_axis;  // length height, Hz
  std::vector<double> time_axis;  // length width, s
  std::vector<StftParams> channel_meta;

  double at(std::size_t c, std::size_t h, std::size_t w) const {
    return values[(c * height + h) * width + w];
  }
  std::span<const double> channel(std::size_t c) const {
    return {values.data() + c * height * width, height * width};
  }
  std::size_t size() const { return values.size(); }
};

struct Resolution {
  double freq_hz = 0.0;
  double time_s = 0.0;
};

// n points, endpoints inclusive. n == 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Separable linear interpolation: along time first, then along frequency.
// Targets outside the source range take the nearest edge value.
Matrix interpolate_to_grid(const Spectrogram& spec, std::span<const double> target_freq,
                           std::span<const double> target_time);

// Finest bin spacing (sample_rate / fft_len) and finest frame spacing
// (hop / sample_rate) over the channels.
Resolution min_resolutions(std::span<const Spectrogram> specs);

// Common grid for already-computed channel spectrograms: frequency over the
// band, time over the intersection of the channels' frame-centre ranges.
void build_grid(std::span<const Spectrogram> specs, double f_lo, double f_hi, const GridSpec& grid,
                std::vector<double>& freq_axis, std::vector<double>& time_axis);

StackedTensor stack_spectrograms(std::span<const Spectrogram> specs, double f_lo, double f_hi,
                                 const GridSpec& grid);

StackedTensor stack_representation(const AudioBuffer& signal, const StackParams& params);

// One-channel tensor on the spectrogram's own axes.
StackedTensor single_channel_tensor(const Spectrogram& spec);

}  // namespace sstack
