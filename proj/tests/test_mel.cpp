#include "doctest.h"
#include "sstack/mel.hpp"
#include "support.hpp"

using namespace sstack;
using testing::error_code;

TEST_CASE("hz_to_mel and mel_to_hz") {
  CHECK(hz_to_mel(0.0) == 0.0);
  // 2595 log10(2) = 781.1726...
  CHECK(std::abs(hz_to_mel(700.0) - 781.1726) <= 0.001);
  CHECK(std::abs(hz_to_mel(1000.0) - 999.99) <= 0.01);
  CHECK(mel_to_hz(0.0) == 0.0);
  CHECK(std::abs(mel_to_hz(999.99) - 1000.0) <= 0.05);
  for (double x : {10.0, 100.0, 1000.0}) CHECK(std::abs(mel_to_hz(hz_to_mel(x)) - x) <= 1e-9 * x);
  CHECK(error_code([] { hz_to_mel(-1.0); }) == Errc::InvalidParameter);
  CHECK(error_code([] { mel_to_hz(-0.5); }) == Errc::InvalidParameter);
}

TEST_CASE("hz_to_mel is strictly increasing and round-trips") {
  double prev = -1.0;
  for (double f = 0.0; f <= 4000.0; f += 0.37) {
    const double m = hz_to_mel(f);
    CHECK(m > prev);
    prev = m;
    if (f > 0) CHECK(std::abs(mel_to_hz(m) - f) <= 1e-9 * f);
  }
}

TEST_CASE("MelParams validation") {
  CHECK_NOTHROW(MelParams{}.validate());
  CHECK(error_code([] { MelParams{1, 10, 1000}.validate(); }) == Errc::InvalidParameter);
  CHECK(error_code([] { MelParams{8, 500, 100}.validate(); }) == Errc::InvalidParameter);
  CHECK(error_code([] { MelFilterbank(MelParams{8, 10, 5000}, 2048, 8000.0); }) == Errc::InvalidParameter);
}

TEST_CASE("filter centres are equally spaced in mels") {
  const MelFilterbank fb(MelParams{}, 2048, 8000.0);
  REQUIRE(fb.size() == 128);
  REQUIRE(fb.edges_hz().size() == 130);
  const double step = (hz_to_mel(1000.0) - hz_to_mel(10.0)) / 129.0;
  for (std::size_t m = 0; m < fb.size(); ++m) {
    CHECK(hz_to_mel(fb.centres_hz()[m]) == doctest::Approx(hz_to_mel(10.0) + (m + 1) * step).epsilon(1e-9));
  }
  for (std::size_t m = 1; m < fb.size(); ++m) {
    CHECK(hz_to_mel(fb.centres_hz()[m]) - hz_to_mel(fb.centres_hz()[m - 1]) == doctest::Approx(step).epsilon(1e-9));
  }
}

TEST_CASE("filter weights are non-negative, unit-peak triangles peaking near the centre") {
  const std::size_t fft_len = 2048;
  const double df = 8000.0 / fft_len;
  const MelFilterbank fb(MelParams{40, 10, 1000}, fft_len, 8000.0);
  for (std::size_t m = 0; m < fb.size(); ++m) {
    const auto w = fb.weights(m);
    REQUIRE(w.size() == fft_len / 2 + 1);
    std::size_t arg = 0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      CHECK(w[k] >= 0.0);
      CHECK(w[k] <= 1.0);
      if (w[k] > w[arg]) arg = k;
    }
    // The largest weight sits on a bin bracketing the centre frequency.
    const double c = fb.centres_hz()[m] / df;
    CHECK(static_cast<double>(arg) >= std::floor(c));
    CHECK(static_cast<double>(arg) <= std::ceil(c));
    // Weights vanish outside the outer edges.
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double f = k * df;
      if (f <= fb.edges_hz()[m] || f >= fb.edges_hz()[m + 2]) CHECK(w[k] == 0.0);
    }
  }
}

TEST_CASE("every bin strictly inside the band has positive total weight") {
  for (std::size_t fft_len : {256u, 2048u, 16384u}) {
    const MelFilterbank fb(MelParams{32, 10, 1000}, fft_len, 8000.0);
    std::vector<double> total(fft_len / 2 + 1, 0.0);
    for (std::size_t m = 0; m < fb.size(); ++m) {
      const auto w = fb.weights(m);
      for (std::size_t k = 0; k < w.size(); ++k) total[k] += w[k];
    }
    for (std::size_t k = 0; k < total.size(); ++k) {
      const double f = k * 8000.0 / fft_len;
      if (f > 10.0 && f < 1000.0) CHECK(total[k] > 0.0);
    }
  }
}

TEST_CASE("mel_spectrogram shape and axes") {
  const auto a = testing::sine(440.0, 10.0);
  const auto s = mel_spectrogram(a, StftParams::for_window(2048), MelParams{});
  CHECK(s.height() == 128);
  CHECK(s.width() == 153);
  const MelFilterbank fb(MelParams{}, 2048, 8000.0);
  CHECK(s.freq_axis == fb.centres_hz());
  for (double v : s.values.data) CHECK(std::isfinite(v));
}

TEST_CASE("a tone at a filter centre makes that band the per-frame argmax (5-band toy)") {
  const MelParams mp{5, 100, 1000};
  const auto p = StftParams::for_window(2048);
  const MelFilterbank fb(mp, p.fft_len, 8000.0);
  for (std::size_t m = 0; m < fb.size(); ++m) {
    const auto a = testing::sine(fb.centres_hz()[m], 2.0);
    const auto s = mel_spectrogram(a, p, mp);
    for (std::size_t t = 0; t < s.width(); ++t) {
      std::size_t best = 0;
      for (std::size_t b = 1; b < s.height(); ++b)
        if (s.values(b, t) > s.values(best, t)) best = b;
      CHECK(best == m);
    }
  }
}

TEST_CASE("apply matches a dense weighted sum") {
  const MelFilterbank fb(MelParams{6, 50, 900}, 256, 8000.0);
  Matrix power(129, 3);
  for (std::size_t i = 0; i < power.data.size(); ++i) power.data[i] = 0.25 + (i % 17);
  const Matrix out = fb.apply(power);
  REQUIRE(out.rows == 6);
  for (std::size_t m = 0; m < 6; ++m) {
    const auto w = fb.weights(m);
    for (std::size_t t = 0; t < 3; ++t) {
      double acc = 0;
      for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * power(k, t);
      CHECK(out(m, t) == doctest::Approx(acc).epsilon(1e-12));
    }
  }
  CHECK(error_code([&] { fb.apply(Matrix(10, 3)); }) == Errc::ShapeMismatch);
}
