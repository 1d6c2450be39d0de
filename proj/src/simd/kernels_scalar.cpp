#include <algorithm>

#include "sstack/simd/kernels.hpp"

namespace sstack::simd {

namespace {

// Written out so the operation order matches the AVX2 addsub sequence exactly.
inline void cmul(double ar, double ai, double br, double bi, double& re, double& im) {
  re = ar * br - ai * bi;
  im = ar * bi + ai * br;
}

void butterfly(Complex* lo, Complex* hi, const Complex* tw, std::size_t half) {
  for (std::size_t j = 0; j < half; ++j) {
    double tr, ti;
    cmul(tw[j].real(), tw[j].imag(), hi[j].real(), hi[j].imag(), tr, ti);
    const double lr = lo[j].real();
    const double li = lo[j].imag();
    hi[j] = Complex(lr - tr, li - ti);
    lo[j] = Complex(lr + tr, li + ti);
  }
}

void window_real(const double* x, const double* w, Complex* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = Complex(x[i] * w[i], 0.0);
}

void power(const Complex* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = x[i].real();
    const double im = x[i].imag();
    out[i] = re * re + im * im;
  }
}

inline double lerp_clamped(double a, double b, double t) {
  const double v = a + (b - a) * t;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  return std::min(std::max(v, lo), hi);
}

void lerp_rows(const double* a, const double* b, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = lerp_clamped(a[i], b[i], t);
}

void lerp_gather(const double* src, const std::uint32_t* i0, const std::uint32_t* i1,
                 const double* frac, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = lerp_clamped(src[i0[i]], src[i1[i]], frac[i]);
}

double sum_sq_standardized(const double* x, const double* mean, const double* inv_sd,
                           const double* c, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (x[i] - mean[i]) * inv_sd[i] - c[i];
    acc += d * d;
  }
  return acc;
}

void standardize(const double* x, const double* mean, const double* inv_sd, double* out,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - mean[i]) * inv_sd[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{butterfly, window_real, power, lerp_rows,
                                 lerp_gather, sum_sq_standardized, standardize};
  return table;
}

}  // namespace sstack::simd
