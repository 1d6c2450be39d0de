#include <algorithm>
#include <cmath>
#include <string>

#include "sstack/dsp.hpp"
#include "sstack/error.hpp"
#include "sstack/simd/kernels.hpp"

namespace sstack {

StftParams StftParams::for_window(std::size_t window_len, std::size_t hop_divisor) {
  if (hop_divisor == 0) throw Error(Errc::InvalidParameter, "hop divisor must be positive");
  StftParams p;
  p.window_len = window_len;
  p.hop = window_len / hop_divisor;
  p.fft_len = window_len;
  p.validate();
  return p;
}

StftParams StftParams::with_hop_fraction(std::size_t window_len, double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw Error(Errc::InvalidParameter, "hop fraction must be in (0, 1], got " + std::to_string(fraction));
  }
  StftParams p;
  p.window_len = window_len;
  p.hop = static_cast<std::size_t>(std::llround(static_cast<double>(window_len) * fraction));
  p.fft_len = window_len;
  p.validate();
  return p;
}

void StftParams::validate() const {
  if (window_len == 0) throw Error(Errc::InvalidParameter, "window_len must be positive");
  if (!is_power_of_two(fft_len)) {
    throw Error(Errc::InvalidParameter, "fft_len must be a power of two, got " + std::to_string(fft_len));
  }
  if (fft_len < window_len) {
    throw Error(Errc::InvalidParameter, "fft_len " + std::to_string(fft_len) +
                                            " is shorter than window_len " + std::to_string(window_len));
  }
  if (hop == 0 || hop > window_len) {
    throw Error(Errc::InvalidParameter, "hop must be in (0, window_len], got " + std::to_string(hop));
  }
}

std::size_t StftParams::frame_count(std::size_t n_samples) const {
  if (n_samples < window_len) return 0;
  return (n_samples - window_len) / hop + 1;
}

FrameMatrix stft(const AudioBuffer& signal, const StftParams& params) {
  params.validate();
  signal.validate();
  if (signal.size() < params.window_len) {
    throw Error(Errc::SignalTooShort, "signal of " + std::to_string(signal.size()) +
                                          " samples is shorter than one window of " +
                                          std::to_string(params.window_len));
  }
  const auto window = make_window(params.window, params.window_len);
  const FftPlan plan(params.fft_len);
  const auto& k = simd::kernels();

  FrameMatrix out;
  out.frames = params.frame_count(signal.size());
  out.bins = params.bins();
  out.data.resize(out.frames * out.bins);

  std::vector<Complex> buffer(params.fft_len);
  for (std::size_t t = 0; t < out.frames; ++t) {
    const double* frame = signal.samples.data() + t * params.hop;
    k.window_real(frame, window.data(), buffer.data(), params.window_len);
    std::fill(buffer.begin() + params.window_len, buffer.end(), Complex{});
    plan.forward(buffer);
    std::copy_n(buffer.begin(), out.bins, out.data.begin() + t * out.bins);
  }
  return out;
}

Matrix power_spectrum(const FrameMatrix& frames) {
  Matrix power(frames.bins, frames.frames);
  std::vector<double> column(frames.bins);
  const auto& k = simd::kernels();
  for (std::size_t t = 0; t < frames.frames; ++t) {
    k.power(frames.data.data() + t * frames.bins, column.data(), frames.bins);
    for (std::size_t f = 0; f < frames.bins; ++f) power(f, t) = column[f];
  }
  return power;
}

void to_db(std::span<double> power) {
  for (double& p : power) p = 10.0 * std::log10(p + kPowerFloor);
}

Spectrogram power_db(const FrameMatrix& frames, const StftParams& params, double sample_rate_hz) {
  if (frames.frames == 0 || frames.bins == 0) {
    throw Error(Errc::InvalidParameter, "power_db needs at least one frame");
  }
  if (!(sample_rate_hz > 0.0)) throw Error(Errc::InvalidParameter, "sample rate must be positive");
  Spectrogram spec;
  spec.values = power_spectrum(frames);
  to_db(spec.values.data);
  spec.freq_axis.resize(frames.bins);
  for (std::size_t f = 0; f < frames.bins; ++f) {
    spec.freq_axis[f] = static_cast<double>(f) * sample_rate_hz / static_cast<double>(params.fft_len);
  }
  spec.time_axis.resize(frames.frames);
  for (std::size_t t = 0; t < frames.frames; ++t) {
    spec.time_axis[t] =
        (static_cast<double>(t * params.hop) + static_cast<double>(params.window_len) / 2.0) /
        sample_rate_hz;
  }
  spec.params = params;
  spec.sample_rate_hz = sample_rate_hz;
  return spec;
}

Spectrogram truncate_freq(const Spectrogram& spec, double f_lo, double f_hi) {
  if (!(f_lo < f_hi)) {
    throw Error(Errc::InvalidParameter, "band requires f_lo < f_hi");
  }
  std::size_t first = spec.freq_axis.size();
  std::size_t last = 0;
  for (std::size_t f = 0; f < spec.freq_axis.size(); ++f) {
    if (spec.freq_axis[f] >= f_lo && spec.freq_axis[f] <= f_hi) {
      first = std::min(first, f);
      last = f;
    }
  }
  if (first == spec.freq_axis.size()) {
    throw Error(Errc::EmptyBand, "no frequency bin inside [" + std::to_string(f_lo) + ", " +
                                     std::to_string(f_hi) + "] Hz");
  }
  Spectrogram out;
  out.params = spec.params;
  out.sample_rate_hz = spec.sample_rate_hz;
  out.time_axis = spec.time_axis;
  out.freq_axis.assign(spec.freq_axis.begin() + first, spec.freq_axis.begin() + last + 1);
  out.values = Matrix(last - first + 1, spec.width());
  std::copy(spec.values.data.begin() + first * spec.width(),
            spec.values.data.begin() + (last + 1) * spec.width(), out.values.data.begin());
  return out;
}

Spectrogram linear_spectrogram(const AudioBuffer& signal, const StftParams& params, double f_lo,
                               double f_hi) {
  return truncate_freq(power_db(stft(signal, params), params, signal.sample_rate_hz), f_lo, f_hi);
}

}  // namespace sstack
