#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference variant and,
// on x86-64, an AVX2 variant picked once at startup from CPUID. The
// element-wise kernels are bit-identical across backends; only the reductions
// (sum_sq_standardized) reassociate and match to rounding.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace sstack::simd {

using Complex = std::complex<double>;

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b);

struct KernelTable {
  // One radix-2 butterfly group: t = tw[j] * hi[j]; hi[j] = lo[j] - t; lo[j] += t.
  void (*butterfly)(Complex* lo, Complex* hi, const Complex* tw, std::size_t half);
  // out[i] = (x[i] * w[i], 0)
  void (*window_real)(const double* x, const double* w, Complex* out, std::size_t n);
  // out[i] = re^2 + im^2
  void (*power)(const Complex* x, double* out, std::size_t n);
  // out[i] = clamp(a[i] + (b[i] - a[i]) * t, min(a,b), max(a,b))
  void (*lerp_rows)(const double* a, const double* b, double t, double* out, std::size_t n);
  // Same law with per-output gather: a = src[i0[i]], b = src[i1[i]], t = frac[i].
  void (*lerp_gather)(const double* src, const std::uint32_t* i0, const std::uint32_t* i1,
                      const double* frac, double* out, std::size_t n);
  // sum_i ((x[i] - mean[i]) * inv_sd[i] - c[i])^2
  double (*sum_sq_standardized)(const double* x, const double* mean, const double* inv_sd,
                                const double* c, std::size_t n);
  // out[i] = (x[i] - mean[i]) * inv_sd[i]
  void (*standardize)(const double* x, const double* mean, const double* inv_sd, double* out,
                      std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the AVX2 variants were not compiled in.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();

// Backend chosen at first use: AVX2 when compiled in and supported by the CPU,
// unless SSTACK_SIMD=scalar is set in the environment.
Backend active_backend();
const KernelTable& kernels();
const KernelTable& kernels_for(Backend b);

}  // namespace sstack::simd
