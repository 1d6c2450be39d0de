#pragma once

#include <cstddef>
#include <vector>

namespace sstack {

// Mono waveform. Amplitudes are dimensionless, nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const { return sample_rate_hz > 0 ? samples.size() / sample_rate_hz : 0.0; }

  // Throws InvalidParameter when the buffer is empty or the rate is not positive.
  void validate() const;

  // Copy of [start_s, start_s + length_s), in samples rounded to nearest.
  // Throws OutOfRange when the window does not fit inside the buffer.
  AudioBuffer slice_seconds(double start_s, double length_s) const;
};

}  // namespace sstack
