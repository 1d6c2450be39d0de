#include "sstack/stacker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sstack/error.hpp"
#include "sstack/simd/kernels.hpp"

namespace sstack {

StackParams StackParams::defaults() {
  StackParams p;
  for (std::size_t w : {256u, 2048u, 16384u}) p.channels.push_back(StftParams::for_window(w, 4));
  p.f_lo = 10.0;
  p.f_hi = 1000.0;
  p.grid = GridSpec::explicit_grid(256, 128);
  return p;
}

void StackParams::validate() const {
  if (channels.empty()) throw Error(Errc::InvalidParameter, "at least one channel is required");
  for (const auto& c : channels) c.validate();
  if (!(f_lo < f_hi)) throw Error(Errc::InvalidParameter, "band requires f_lo < f_hi");
  if (grid.mode == GridSpec::Mode::Explicit && (grid.height < 2 || grid.width < 2)) {
    throw Error(Errc::InvalidParameter, "explicit grid needs height >= 2 and width >= 2");
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 0) return out;
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double span = hi - lo;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + span * (static_cast<double>(i) / denom);
  out.back() = hi;
  return out;
}

namespace {

// For each target coordinate, the bracketing source indices and the Eq.-style
// fraction (x - x_i) / (x_{i+1} - x_i). Out-of-range targets clamp to an edge.
struct Bracket {
  std::vector<std::uint32_t> i0;
  std::vector<std::uint32_t> i1;
  std::vector<double> frac;
};

Bracket bracket(std::span<const double> src, std::span<const double> target) {
  Bracket b;
  b.i0.resize(target.size());
  b.i1.resize(target.size());
  b.frac.resize(target.size());
  const std::size_t n = src.size();
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double x = target[j];
    std::size_t lo;
    std::size_t hi;
    double t = 0.0;
    if (!(x > src.front())) {
      lo = hi = 0;
    } else if (!(x < src.back())) {
      lo = hi = n - 1;
    } else {
      // First source point strictly greater than x; src[lo] <= x < src[hi].
      hi = static_cast<std::size_t>(std::upper_bound(src.begin(), src.end(), x) - src.begin());
      lo = hi - 1;
      if (src[lo] == x) {
        hi = lo;
      } else {
        t = (x - src[lo]) / (src[hi] - src[lo]);
      }
    }
    b.i0[j] = static_cast<std::uint32_t>(lo);
    b.i1[j] = static_cast<std::uint32_t>(hi);
    b.frac[j] = t;
  }
  return b;
}

bool strictly_ascending(std::span<const double> axis) {
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) return false;
  }
  return true;
}

void check_axis(std::span<const double> src, std::span<const double> target, const char* name) {
  if (src.empty()) throw Error(Errc::DegenerateSource, std::string("source has no ") + name + " points");
  if (!strictly_ascending(target)) {
    throw Error(Errc::InvalidParameter, std::string("target ") + name + " axis is not strictly ascending");
  }
  if (src.size() == 1) {
    for (double x : target) {
      if (x != src.front()) {
        throw Error(Errc::DegenerateSource,
                    std::string("cannot interpolate along ") + name + " from a single source point");
      }
    }
  }
}

}  // namespace

Matrix interpolate_to_grid(const Spectrogram& spec, std::span<const double> target_freq,
                           std::span<const double> target_time) {
  if (spec.freq_axis.size() != spec.height() || spec.time_axis.size() != spec.width()) {
    throw Error(Errc::ShapeMismatch, "spectrogram axes do not match its value matrix");
  }
  check_axis(spec.freq_axis, target_freq, "frequency");
  check_axis(spec.time_axis, target_time, "time");

  const auto& k = simd::kernels();
  const Bracket tb = bracket(spec.time_axis, target_time);
  const Bracket fb = bracket(spec.freq_axis, target_freq);

  // Pass 1: every source frequency row resampled onto the target time axis.
  Matrix along_time(spec.height(), target_time.size());
  for (std::size_t f = 0; f < spec.height(); ++f) {
    k.lerp_gather(spec.values.row(f).data(), tb.i0.data(), tb.i1.data(), tb.frac.data(),
                  along_time.row(f).data(), target_time.size());
  }
  // Pass 2: blend pairs of those rows along frequency.
  Matrix out(target_freq.size(), target_time.size());
  for (std::size_t h = 0; h < target_freq.size(); ++h) {
    k.lerp_rows(along_time.row(fb.i0[h]).data(), along_time.row(fb.i1[h]).data(), fb.frac[h],
                out.row(h).data(), target_time.size());
  }
  return out;
}

Resolution min_resolutions(std::span<const Spectrogram> specs) {
  Resolution r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& s : specs) {
    const double df = s.sample_rate_hz / static_cast<double>(s.params.fft_len);
    const double dt = static_cast<double>(s.params.hop) / s.sample_rate_hz;
    r.freq_hz = std::min(r.freq_hz, df);
    r.time_s = std::min(r.time_s, dt);
  }
  return r;
}

void build_grid(std::span<const Spectrogram> specs, double f_lo, double f_hi, const GridSpec& grid,
                std::vector<double>& freq_axis, std::vector<double>& time_axis) {
  if (specs.empty()) throw Error(Errc::InvalidParameter, "no spectrograms to stack");
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  for (const auto& s : specs) {
    if (s.time_axis.empty()) throw Error(Errc::DegenerateSource, "channel has no frames");
    t_lo = std::max(t_lo, s.time_axis.front());
    t_hi = std::min(t_hi, s.time_axis.back());
  }
  if (t_lo > t_hi) throw Error(Errc::DegenerateSource, "channels share no common time range");

  if (grid.mode == GridSpec::Mode::Explicit) {
    freq_axis = linspace(f_lo, f_hi, grid.height);
    time_axis = linspace(t_lo, t_hi, grid.width);
    return;
  }
  const Resolution res = min_resolutions(specs);
  auto stepped = [](double lo, double hi, double step) {
    // Small slack so an exact multiple of the step keeps its endpoint.
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> axis(n);
    for (std::size_t i = 0; i < n; ++i) axis[i] = lo + static_cast<double>(i) * step;
    return axis;
  };
  freq_axis = stepped(f_lo, f_hi, res.freq_hz);
  time_axis = stepped(t_lo, t_hi, res.time_s);
}

StackedTensor stack_spectrograms(std::span<const Spectrogram> specs, double f_lo, double f_hi,
                                 const GridSpec& grid) {
  StackedTensor z;
  build_grid(specs, f_lo, f_hi, grid, z.freq_axis, z.time_axis);
  z.channels = specs.size();
  z.height = z.freq_axis.size();
  z.width = z.time_axis.size();
  z.values.resize(z.channels * z.height * z.width);
  for (std::size_t c = 0; c < specs.size(); ++c) {
    const Matrix s = interpolate_to_grid(specs[c], z.freq_axis, z.time_axis);
    std::copy(s.data.begin(), s.data.end(), z.values.begin() + c * z.height * z.width);
    z.channel_meta.push_back(specs[c].params);
  }
  return z;
}

StackedTensor stack_representation(const AudioBuffer& signal, const StackParams& params) {
  params.validate();
  std::vector<Spectrogram> specs;
  specs.reserve(params.channels.size());
  for (std::size_t i = 0; i < params.channels.size(); ++i) {
    try {
      specs.push_back(linear_spectrogram(signal, params.channels[i], params.f_lo, params.f_hi));
    } catch (const Error& e) {
      if (e.code() != Errc::SignalTooShort) throw;
      throw Error(Errc::SignalTooShort, "channel " + std::to_string(i) + " (window " +
                                            std::to_string(params.channels[i].window_len) +
                                            "): " + e.what());
    }
  }
  return stack_spectrograms(specs, params.f_lo, params.f_hi, params.grid);
}

StackedTensor single_channel_tensor(const Spectrogram& spec) {
  StackedTensor z;
  z.channels = 1;
  z.height = spec.height();
  z.width = spec.width();
  z.values = spec.values.data;
  z.freq_axis = spec.freq_axis;
  z.time_axis = spec.time_axis;
  z.channel_meta.push_back(spec.params);
  return z;
}

}  // namespace sstack
