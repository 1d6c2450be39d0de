#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sstack/audio.hpp"
#include "sstack/error.hpp"

namespace testing {

// Runs fn and returns the Errc it threw; fails the test if it did not throw.
template <class Fn>
sstack::Errc error_code(Fn&& fn) {
  try {
    fn();
  } catch (const sstack::Error& e) {
    return e.code();
  }
  FAIL("expected sstack::Error");
  return sstack::Errc::Io;
}

inline sstack::AudioBuffer sine(double freq_hz, double seconds, double sr = 8000.0, double amp = 0.5) {
  sstack::AudioBuffer a;
  a.sample_rate_hz = sr;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
  a.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) a.samples[i] = amp * std::sin(2 * std::numbers::pi * freq_hz * i / sr);
  return a;
}

}  // namespace testing
