#include <random>

#include "doctest.h"
#include "oracles/dft.hpp"
#include "sstack/dsp.hpp"
#include "support.hpp"

using namespace sstack;
using testing::error_code;

TEST_CASE("make_window: periodic Hann") {
  const auto w4 = make_window(WindowKind::Hann, 4);
  REQUIRE(w4.size() == 4);
  CHECK(w4[0] == doctest::Approx(0.0));
  CHECK(w4[1] == doctest::Approx(0.5));
  CHECK(w4[2] == doctest::Approx(1.0));
  CHECK(w4[3] == doctest::Approx(0.5));

  for (std::size_t n : {2u, 3u, 256u, 2048u}) CHECK(make_window(WindowKind::Hann, n)[0] == 0.0);

  double sum = 0;
  for (double v : make_window(WindowKind::Hann, 1024)) sum += v;
  CHECK(std::abs(sum - 512.0) <= 1e-9);

  CHECK(error_code([] { make_window(WindowKind::Hann, 0); }) == Errc::InvalidParameter);
}

TEST_CASE("StftParams validation") {
  CHECK_NOTHROW(StftParams::for_window(2048).validate());
  CHECK(StftParams::for_window(2048).hop == 512);
  StftParams p = StftParams::for_window(256);
  p.fft_len = 128;
  CHECK(error_code([&] { p.validate(); }) == Errc::InvalidParameter);
  p = StftParams::for_window(256);
  p.hop = 0;
  CHECK(error_code([&] { p.validate(); }) == Errc::InvalidParameter);
  p.hop = 257;
  CHECK(error_code([&] { p.validate(); }) == Errc::InvalidParameter);
  p = StftParams::for_window(256);
  p.fft_len = 300;
  CHECK(error_code([&] { p.validate(); }) == Errc::InvalidParameter);
}

TEST_CASE("stft frame counts") {
  StftParams p = StftParams::for_window(2048);
  CHECK(p.frame_count(80000) == 153);
  p = StftParams::for_window(16384);
  CHECK(p.frame_count(80000) == 16);

  AudioBuffer a{std::vector<double>(80000, 0.1), 8000.0};
  const auto frames = stft(a, StftParams::for_window(2048));
  CHECK(frames.frames == 153);
  CHECK(frames.bins == 1025);
}

TEST_CASE("stft frame count formula holds for many shapes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = std::size_t{1} << (2 + rng() % 8);
    const std::size_t hop = 1 + rng() % w;
    const std::size_t len = w + rng() % 5000;
    StftParams p{w, hop, WindowKind::Hann, w};
    CHECK(p.frame_count(len) == (len - w) / hop + 1);
  }
  AudioBuffer a{std::vector<double>(300, 0.0), 8000.0};
  for (std::size_t hop : {1u, 7u, 64u}) {
    StftParams p{64, hop, WindowKind::Hann, 64};
    CHECK(stft(a, p).frames == (300 - 64) / hop + 1);
  }
}

TEST_CASE("stft rejects a signal shorter than one window") {
  AudioBuffer a{std::vector<double>(100, 0.0), 8000.0};
  CHECK(error_code([&] { stft(a, StftParams::for_window(256)); }) == Errc::SignalTooShort);
}

TEST_CASE("stft of a 100 Hz sine peaks at bin 3 for window 256") {
  const auto a = testing::sine(100.0, 1.0);
  const auto frames = stft(a, StftParams::for_window(256));
  for (std::size_t t = 0; t < frames.frames; ++t) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < frames.bins; ++k)
      if (std::abs(frames.at(t, k)) > std::abs(frames.at(t, best))) best = k;
    CHECK(best == 3);
  }
}

TEST_CASE("stft frames match a windowed brute-force DFT") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  AudioBuffer a{std::vector<double>(700), 8000.0};
  for (auto& v : a.samples) v = d(rng);
  const StftParams p{128, 100, WindowKind::Hann, 256};  // zero-padded
  const auto frames = stft(a, p);
  const auto w = make_window(WindowKind::Hann, 128);
  REQUIRE(frames.frames == 6);
  for (std::size_t t = 0; t < frames.frames; ++t) {
    std::vector<oracle::Complex> x(256);
    for (std::size_t m = 0; m < 128; ++m) x[m] = a.samples[t * 100 + m] * w[m];
    const auto X = oracle::dft(x);
    for (std::size_t k = 0; k < frames.bins; ++k) CHECK(std::abs(frames.at(t, k) - X[k]) <= 1e-9 * oracle::max_abs(X));
  }
}

TEST_CASE("power_db values and axes") {
  FrameMatrix fm;
  fm.frames = 2;
  fm.bins = 3;
  fm.data = {Complex(1, 0), Complex(0, 0), Complex(6, 8), Complex(0, 1), Complex(10, 0), Complex(0, 0)};
  const StftParams p{4, 2, WindowKind::Hann, 4};
  const auto s = power_db(fm, p, 8000.0);
  REQUIRE(s.height() == 3);
  REQUIRE(s.width() == 2);
  CHECK(s.values(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s.values(1, 0) == -120.0);
  CHECK(std::abs(s.values(1, 1) - 20.0) <= 1e-9);
  CHECK(std::abs(s.values(2, 0) - 20.0) <= 1e-9);
  CHECK(s.freq_axis == std::vector<double>{0.0, 2000.0, 4000.0});
  CHECK(s.time_axis[0] == doctest::Approx(2.0 / 8000.0));
  CHECK(s.time_axis[1] == doctest::Approx(4.0 / 8000.0));
}

TEST_CASE("power_db is finite for silent and loud input") {
  AudioBuffer a{std::vector<double>(4096, 0.0), 8000.0};
  for (std::size_t i = 2048; i < 4096; ++i) a.samples[i] = (i % 2) ? 1e6 : -1e6;
  const auto fr = stft(a, StftParams::for_window(512));
  const auto s = power_db(fr, StftParams::for_window(512), 8000.0);
  for (double v : s.values.data) {
    CHECK(std::isfinite(v));
    CHECK(v >= -120.0);
  }
}

TEST_CASE("truncate_freq keeps the inclusive band, bit-exact") {
  const auto a = testing::sine(200.0, 10.0);
  {
    const auto full = power_db(stft(a, StftParams::for_window(256)), StftParams::for_window(256), 8000.0);
    const auto t = truncate_freq(full, 10.0, 1000.0);
    REQUIRE(t.height() == 32);
    CHECK(t.freq_axis.front() == 31.25);
    CHECK(t.freq_axis.back() == 1000.0);
    for (std::size_t f = 0; f < t.height(); ++f)
      for (std::size_t c = 0; c < t.width(); ++c) CHECK(t.values(f, c) == full.values(f + 1, c));
    CHECK(t.time_axis == full.time_axis);
  }
  {
    const auto p = StftParams::for_window(16384);
    const auto full = power_db(stft(a, p), p, 8000.0);
    const auto t = truncate_freq(full, 10.0, 1000.0);
    CHECK(t.height() == 2048 - 21 + 1);
    CHECK(t.freq_axis.front() == doctest::Approx(21 * 8000.0 / 16384));
    CHECK(t.freq_axis.back() == 1000.0);
    bool same = true;
    for (std::size_t f = 0; f < t.height(); ++f)
      for (std::size_t c = 0; c < t.width(); ++c) same = same && t.values(f, c) == full.values(f + 21, c);
    CHECK(same);
  }
  {
    const auto p = StftParams::for_window(256);
    const auto full = power_db(stft(a, p), p, 8000.0);
    CHECK(truncate_freq(full, 0.0, 4000.0).values == full.values);
    CHECK(error_code([&] { truncate_freq(full, 40.0, 60.0); }) == Errc::EmptyBand);
    CHECK(error_code([&] { truncate_freq(full, 60.0, 40.0); }) == Errc::InvalidParameter);
  }
}

TEST_CASE("linear_spectrogram composes the stages") {
  const auto a = testing::sine(300.0, 2.0);
  const auto p = StftParams::for_window(1024);
  const auto direct = linear_spectrogram(a, p, 10.0, 1000.0);
  const auto staged = truncate_freq(power_db(stft(a, p), p, 8000.0), 10.0, 1000.0);
  CHECK(direct.values == staged.values);
  CHECK(direct.freq_axis == staged.freq_axis);
}
