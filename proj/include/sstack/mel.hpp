#pragma once

#include <cstddef>
#include <vector>

#include "sstack/dsp.hpp"

namespace sstack {

struct MelParams {
  std::size_t n_mels = 128;
  double f_lo = 10.0;
  double f_hi = 1000.0;

  void validate() const;
};

// 2595 log10(1 + f / 700). Negative input throws InvalidParameter.
double hz_to_mel(double hz);
// 700 (10^(m / 2595) - 1). Negative input throws InvalidParameter.
double mel_to_hz(double mel);

// Unit-peak triangular filters over the linear bins of an fft_len-point
// spectrum. Edges are n_mels + 2 points equally spaced in mels over
// [f_lo, f_hi]; filter m rises from edge m to edge m+1 and falls to edge m+2.
class MelFilterbank {
 public:
  MelFilterbank(const MelParams& params, std::size_t fft_len, double sample_rate_hz);

  std::size_t size() const { return centres_hz_.size(); }
  const std::vector<double>& centres_hz() const { return centres_hz_; }
  const std::vector<double>& edges_hz() const { return edges_hz_; }

  // Dense weights of filter m, one entry per linear bin (fft_len/2 + 1).
  std::vector<double> weights(std::size_t m) const;

  // Linear power (bins x frames) to mel-band power (n_mels x frames).
  Matrix apply(const Matrix& power) const;

 private:
  struct Band {
    std::size_t first_bin = 0;
    std::vector<double> w;
  };
  std::size_t n_bins_;
  std::vector<double> edges_hz_;
  std::vector<double> centres_hz_;
  std::vector<Band> bands_;
};

// Power spectrogram mapped through the filterbank, then to dB. freq_axis holds
// the filter centre frequencies.
Spectrogram mel_spectrogram(const AudioBuffer& signal, const StftParams& stft_params,
                            const MelParams& mel_params);

}  // namespace sstack
