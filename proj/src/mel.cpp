#include "sstack/mel.hpp"

#include <cmath>
#include <string>

#include "sstack/error.hpp"

namespace sstack {

void MelParams::validate() const {
  if (n_mels < 2) throw Error(Errc::InvalidParameter, "n_mels must be at least 2");
  if (!(f_lo >= 0.0) || !(f_lo < f_hi)) {
    throw Error(Errc::InvalidParameter, "mel band requires 0 <= f_lo < f_hi");
  }
}

double hz_to_mel(double hz) {
  if (!(hz >= 0.0)) throw Error(Errc::InvalidParameter, "negative frequency " + std::to_string(hz));
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
  if (!(mel >= 0.0)) throw Error(Errc::InvalidParameter, "negative mel value " + std::to_string(mel));
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const MelParams& params, std::size_t fft_len, double sample_rate_hz) {
  params.validate();
  if (!is_power_of_two(fft_len)) throw Error(Errc::InvalidParameter, "fft_len must be a power of two");
  if (params.f_hi > sample_rate_hz / 2.0) {
    throw Error(Errc::InvalidParameter, "mel band upper edge " + std::to_string(params.f_hi) +
                                            " Hz exceeds Nyquist " + std::to_string(sample_rate_hz / 2.0));
  }
  n_bins_ = fft_len / 2 + 1;
  const double m_lo = hz_to_mel(params.f_lo);
  const double m_hi = hz_to_mel(params.f_hi);
  const std::size_t n_edges = params.n_mels + 2;
  edges_hz_.resize(n_edges);
  for (std::size_t i = 0; i < n_edges; ++i) {
    const double m = m_lo + (m_hi - m_lo) * static_cast<double>(i) / static_cast<double>(n_edges - 1);
    edges_hz_[i] = mel_to_hz(m);
  }
  edges_hz_.front() = params.f_lo;
  edges_hz_.back() = params.f_hi;

  const double bin_hz = sample_rate_hz / static_cast<double>(fft_len);
  centres_hz_.resize(params.n_mels);
  bands_.resize(params.n_mels);
  for (std::size_t m = 0; m < params.n_mels; ++m) {
    const double left = edges_hz_[m];
    const double centre = edges_hz_[m + 1];
    const double right = edges_hz_[m + 2];
    centres_hz_[m] = centre;
    Band& band = bands_[m];
    const auto first = static_cast<std::size_t>(std::floor(left / bin_hz));
    const auto last = std::min(n_bins_ - 1, static_cast<std::size_t>(std::ceil(right / bin_hz)));
    band.first_bin = first;
    for (std::size_t k = first; k <= last; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > left && f <= centre) {
        w = (f - left) / (centre - left);
      } else if (f > centre && f < right) {
        w = (right - f) / (right - centre);
      }
      band.w.push_back(w);
    }
  }
}

std::vector<double> MelFilterbank::weights(std::size_t m) const {
  std::vector<double> dense(n_bins_, 0.0);
  const Band& band = bands_.at(m);
  for (std::size_t i = 0; i < band.w.size(); ++i) dense[band.first_bin + i] = band.w[i];
  return dense;
}

Matrix MelFilterbank::apply(const Matrix& power) const {
  if (power.rows != n_bins_) {
    throw Error(Errc::ShapeMismatch, "filterbank expects " + std::to_string(n_bins_) +
                                         " linear bins, got " + std::to_string(power.rows));
  }
  Matrix out(bands_.size(), power.cols);
  for (std::size_t m = 0; m < bands_.size(); ++m) {
    const Band& band = bands_[m];
    auto dst = out.row(m);
    for (std::size_t i = 0; i < band.w.size(); ++i) {
      const double w = band.w[i];
      if (w == 0.0) continue;
      const auto src = power.row(band.first_bin + i);
      for (std::size_t t = 0; t < power.cols; ++t) dst[t] += w * src[t];
    }
  }
  return out;
}

Spectrogram mel_spectrogram(const AudioBuffer& signal, const StftParams& stft_params,
                            const MelParams& mel_params) {
  const MelFilterbank bank(mel_params, stft_params.fft_len, signal.sample_rate_hz);
  const FrameMatrix frames = stft(signal, stft_params);
  // Reuse power_db for the axes, then replace values with mel-band power.
  Spectrogram spec = power_db(frames, stft_params, signal.sample_rate_hz);
  spec.values = bank.apply(power_spectrum(frames));
  to_db(spec.values.data);
  spec.freq_axis = bank.centres_hz();
  return spec;
}

}  // namespace sstack
