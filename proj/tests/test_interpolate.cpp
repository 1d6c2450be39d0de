#include <random>

#include "doctest.h"
#include "oracles/interp.hpp"
#include "sstack/stacker.hpp"
#include "support.hpp"

using namespace sstack;
using testing::error_code;

namespace {

Spectrogram make_spec(std::vector<double> freq, std::vector<double> time, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-120.0, 10.0);
  Spectrogram s;
  s.values = Matrix(freq.size(), time.size());
  for (auto& v : s.values.data) v = d(rng);
  s.freq_axis = std::move(freq);
  s.time_axis = std::move(time);
  return s;
}

std::vector<double> random_axis(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> a(n);
  for (auto& v : a) v = d(rng);
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

TEST_CASE("identity grid reproduces the input") {
  std::mt19937_64 rng(1);
  const auto s = make_spec({1, 2, 4, 8}, {0.1, 0.2, 0.35}, rng);
  const Matrix out = interpolate_to_grid(s, s.freq_axis, s.time_axis);
  for (std::size_t i = 0; i < out.data.size(); ++i) CHECK(std::abs(out.data[i] - s.values.data[i]) <= 1e-12);
}

TEST_CASE("2x2 source at the frequency midpoint") {
  Spectrogram s;
  s.values = Matrix(2, 2);
  s.values.data = {0, 0, 10, 10};
  s.freq_axis = {0.0, 1.0};
  s.time_axis = {0.0, 1.0};
  const std::vector<double> f{0.5}, t{0.0, 0.25, 1.0};
  const Matrix out = interpolate_to_grid(s, f, t);
  for (double v : out.data) CHECK(v == doctest::Approx(5.0));
}

TEST_CASE("random 7x9 sources match the per-point oracle") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = make_spec(random_axis(7, 0, 100, rng), random_axis(9, 0, 5, rng), rng);
    if (s.freq_axis.size() < 2 || s.time_axis.size() < 2) continue;
    // Targets deliberately overhang the source range on both sides.
    const auto tf = random_axis(1 + rng() % 20, -10, 110, rng);
    const auto tt = random_axis(1 + rng() % 20, -1, 6, rng);
    const Matrix out = interpolate_to_grid(s, tf, tt);
    std::vector<std::vector<double>> grid(s.height(), std::vector<double>(s.width()));
    for (std::size_t f = 0; f < s.height(); ++f)
      for (std::size_t t = 0; t < s.width(); ++t) grid[f][t] = s.values(f, t);
    for (std::size_t h = 0; h < tf.size(); ++h)
      for (std::size_t w = 0; w < tt.size(); ++w)
        CHECK(std::abs(out(h, w) - oracle::bilinear_point(grid, s.freq_axis, s.time_axis, tf[h], tt[w])) <= 1e-9);
  }
}

TEST_CASE("interpolation never overshoots the source range") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = make_spec(random_axis(12, 0, 50, rng), random_axis(10, 0, 3, rng), rng);
    const auto [lo, hi] = std::minmax_element(s.values.data.begin(), s.values.data.end());
    const Matrix out = interpolate_to_grid(s, linspace(-5, 55, 37), linspace(-0.5, 3.5, 23));
    for (double v : out.data) {
      CHECK(v >= *lo);
      CHECK(v <= *hi);
    }
  }
}

TEST_CASE("constant extrapolation outside the source axes") {
  std::mt19937_64 rng(3);
  const auto s = make_spec({10, 20, 30}, {1, 2, 3}, rng);
  const std::vector<double> f{0.0, 40.0}, t{0.0, 9.0};
  const Matrix out = interpolate_to_grid(s, f, t);
  CHECK(out(0, 0) == s.values(0, 0));
  CHECK(out(0, 1) == s.values(0, 2));
  CHECK(out(1, 0) == s.values(2, 0));
  CHECK(out(1, 1) == s.values(2, 2));
}

TEST_CASE("degenerate sources and bad targets are rejected") {
  std::mt19937_64 rng(5);
  const auto one_bin = make_spec({100}, {0, 1, 2}, rng);
  const std::vector<double> f{50, 150}, t{0.5, 1.5};
  CHECK(error_code([&] { interpolate_to_grid(one_bin, f, t); }) == Errc::DegenerateSource);
  const auto one_frame = make_spec({1, 2, 3}, {0.5}, rng);
  CHECK(error_code([&] { interpolate_to_grid(one_frame, f, t); }) == Errc::DegenerateSource);
  // A single point queried exactly at its own coordinate needs no interpolation.
  const std::vector<double> at_bin{100};
  CHECK_NOTHROW(interpolate_to_grid(one_bin, at_bin, t));

  const auto ok = make_spec({1, 2, 3}, {0, 1}, rng);
  const std::vector<double> unsorted{2, 1};
  CHECK(error_code([&] { interpolate_to_grid(ok, unsorted, t); }) == Errc::InvalidParameter);
}

TEST_CASE("linspace includes both endpoints") {
  const auto a = linspace(10.0, 1000.0, 256);
  REQUIRE(a.size() == 256);
  CHECK(a.front() == 10.0);
  CHECK(a.back() == 1000.0);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] - a[i - 1] == doctest::Approx(990.0 / 255));
  CHECK(linspace(3.0, 7.0, 1) == std::vector<double>{3.0});
}
