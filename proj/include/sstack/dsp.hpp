#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sstack/audio.hpp"
#include "sstack/matrix.hpp"

namespace sstack {

using Complex = std::complex<double>;

enum class WindowKind { Hann };

struct StftParams {
  std::size_t window_len = 2048;
  std::size_t hop = 512;
  WindowKind window = WindowKind::Hann;
  std::size_t fft_len = 2048;

  // fft_len = window_len, hop = window_len / divisor.
  static StftParams for_window(std::size_t window_len, std::size_t hop_divisor = 4);
  // hop = round(window_len * fraction); 0.75 gives the "overlap = w/4" reading.
  static StftParams with_hop_fraction(std::size_t window_len, double fraction);

  // Throws InvalidParameter on a broken invariant.
  void validate() const;
  // floor((n - window_len) / hop) + 1; zero when n < window_len.
  std::size_t frame_count(std::size_t n_samples) const;
  std::size_t bins() const { return fft_len / 2 + 1; }

  friend bool operator==(const StftParams&, const StftParams&) = default;
};

// dB floor added to every power value before the log: 1e-12, i.e. -120 dB.
inline constexpr double kPowerFloor = 1e-12;

// Periodic window: w[m] = 0.5 (1 - cos(2 pi m / n)).
std::vector<double> make_window(WindowKind kind, std::size_t n);

bool is_power_of_two(std::size_t n);

// Radix-2 decimation-in-time FFT with precomputed twiddles and bit-reversal.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const { return n_; }
  // Forward transform, X[k] = sum_m x[m] e^{-j 2 pi k m / N}.
  void forward(std::span<Complex> data) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  // Per stage, `half` twiddles laid out contiguously: stage s starts at offset half - 1.
  std::vector<Complex> twiddles_;
};

std::vector<Complex> fft(std::span<const Complex> x);

// Complex STFT frames, frame-major: at(t, k) for frame t, bin k in [0, fft_len/2].
struct FrameMatrix {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<Complex> data;

  Complex at(std::size_t t, std::size_t k) const { return data[t * bins + k]; }
  std::span<const Complex> frame(std::size_t t) const { return {data.data() + t * bins, bins}; }
};

FrameMatrix stft(const AudioBuffer& signal, const StftParams& params);

// dB-valued time-frequency matrix. values(f, t): row f is a frequency bin,
// column t a frame.
struct Spectrogram {
  Matrix values;
  std::vector<double> freq_axis;  // Hz, ascending
  std::vector<double> time_axis;  // s, frame centres, ascending
  StftParams params;
  double sample_rate_hz = 0.0;

  std::size_t height() const { return values.rows; }
  std::size_t width() const { return values.cols; }
};

// |X|^2 with frequency rows and frame columns.
Matrix power_spectrum(const FrameMatrix& frames);

// 10 log10(p + kPowerFloor), element-wise in place.
void to_db(std::span<double> power);

Spectrogram power_db(const FrameMatrix& frames, const StftParams& params, double sample_rate_hz);

// Keeps rows with f_lo <= freq <= f_hi; values are copied, never interpolated.
Spectrogram truncate_freq(const Spectrogram& spec, double f_lo, double f_hi);

// stft -> power_db -> truncate_freq.
Spectrogram linear_spectrogram(const AudioBuffer& signal, const StftParams& params, double f_lo,
                               double f_hi);

}  // namespace sstack
