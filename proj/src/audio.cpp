#include "sstack/audio.hpp"

#include <cmath>
#include <string>

#include "sstack/error.hpp"

namespace sstack {

void AudioBuffer::validate() const {
  if (samples.empty()) throw Error(Errc::InvalidParameter, "audio buffer is empty");
  if (!(sample_rate_hz > 0.0)) {
    throw Error(Errc::InvalidParameter,
                "sample rate must be positive, got " + std::to_string(sample_rate_hz));
  }
}

AudioBuffer AudioBuffer::slice_seconds(double start_s, double length_s) const {
  const auto first = static_cast<long long>(std::llround(start_s * sample_rate_hz));
  const auto count = static_cast<long long>(std::llround(length_s * sample_rate_hz));
  if (first < 0 || count <= 0 || first + count > static_cast<long long>(samples.size())) {
    throw Error(Errc::OutOfRange, "slice [" + std::to_string(start_s) + " s, +" +
                                      std::to_string(length_s) + " s) outside buffer of " +
                                      std::to_string(duration_s()) + " s");
  }
  AudioBuffer out;
  out.sample_rate_hz = sample_rate_hz;
  out.samples.assign(samples.begin() + first, samples.begin() + first + count);
  return out;
}

}  // namespace sstack
