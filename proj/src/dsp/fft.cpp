#include <cmath>
#include <numbers>
#include <string>

#include "sstack/dsp.hpp"
#include "sstack/error.hpp"
#include "sstack/simd/kernels.hpp"

namespace sstack {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) {
    throw Error(Errc::InvalidParameter, "FFT length must be a power of two, got " + std::to_string(n));
  }
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  // Stage with butterfly span 2*half uses w_j = exp(-2 pi i j / (2 half)).
  twiddles_.resize(n > 1 ? n - 1 : 0);
  for (std::size_t half = 1; half < n; half <<= 1) {
    Complex* stage = twiddles_.data() + (half - 1);
    for (std::size_t j = 0; j < half; ++j) {
      const double angle = -std::numbers::pi * static_cast<double>(j) / static_cast<double>(half);
      stage[j] = Complex(std::cos(angle), std::sin(angle));
    }
  }
}

void FftPlan::forward(std::span<Complex> data) const {
  if (data.size() != n_) {
    throw Error(Errc::InvalidParameter, "FFT plan of length " + std::to_string(n_) +
                                            " applied to " + std::to_string(data.size()) + " points");
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t r = bitrev_[i];
    if (r > i) std::swap(data[i], data[r]);
  }
  const auto& k = simd::kernels();
  for (std::size_t half = 1; half < n_; half <<= 1) {
    const Complex* tw = twiddles_.data() + (half - 1);
    for (std::size_t start = 0; start < n_; start += 2 * half) {
      k.butterfly(data.data() + start, data.data() + start + half, tw, half);
    }
  }
}

std::vector<Complex> fft(std::span<const Complex> x) {
  FftPlan plan(x.size());
  std::vector<Complex> out(x.begin(), x.end());
  plan.forward(out);
  return out;
}

}  // namespace sstack
