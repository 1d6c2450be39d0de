// Compiled with -mavx2; only reached after a CPUID check.

#include <immintrin.h>

#include "sstack/simd/kernels.hpp"

namespace sstack::simd {

namespace {

static_assert(sizeof(Complex) == 2 * sizeof(double));

inline const double* as_doubles(const Complex* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(Complex* p) { return reinterpret_cast<double*>(p); }

// [wr*hr - wi*hi, wr*hi + wi*hr] for two complex lanes.
inline __m256d cmul(__m256d w, __m256d h) {
  const __m256d wr = _mm256_movedup_pd(w);
  const __m256d wi = _mm256_permute_pd(w, 0xF);
  const __m256d hs = _mm256_permute_pd(h, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(wr, h), _mm256_mul_pd(wi, hs));
}

void butterfly(Complex* lo, Complex* hi, const Complex* tw, std::size_t half) {
  std::size_t j = 0;
  double* l = as_doubles(lo);
  double* h = as_doubles(hi);
  const double* w = as_doubles(tw);
  for (; j + 2 <= half; j += 2) {
    const __m256d t = cmul(_mm256_loadu_pd(w + 2 * j), _mm256_loadu_pd(h + 2 * j));
    const __m256d a = _mm256_loadu_pd(l + 2 * j);
    _mm256_storeu_pd(h + 2 * j, _mm256_sub_pd(a, t));
    _mm256_storeu_pd(l + 2 * j, _mm256_add_pd(a, t));
  }
  if (j < half) scalar_kernels().butterfly(lo + j, hi + j, tw + j, half - j);
}

void window_real(const double* x, const double* w, Complex* out, std::size_t n) {
  std::size_t i = 0;
  double* o = as_doubles(out);
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i));
    // Interleave with zeros: [p0 0 p1 0] and [p2 0 p3 0].
    const __m256d lo = _mm256_unpacklo_pd(p, zero);
    const __m256d hi = _mm256_unpackhi_pd(p, zero);
    _mm256_storeu_pd(o + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
    _mm256_storeu_pd(o + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
  }
  if (i < n) scalar_kernels().window_real(x + i, w + i, out + i, n - i);
}

void power(const Complex* x, double* out, std::size_t n) {
  std::size_t i = 0;
  const double* p = as_doubles(x);
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(p + 2 * i);
    const __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    const __m256d a2 = _mm256_mul_pd(a, a);
    const __m256d b2 = _mm256_mul_pd(b, b);
    // hadd gives [a0+a1, b0+b1, a2+a3, b2+b3]; reorder lanes to x0..x3.
    const __m256d s = _mm256_hadd_pd(a2, b2);
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(s, 0xD8));
  }
  if (i < n) scalar_kernels().power(x + i, out + i, n - i);
}

inline __m256d lerp_clamped(__m256d a, __m256d b, __m256d t) {
  const __m256d v = _mm256_add_pd(a, _mm256_mul_pd(_mm256_sub_pd(b, a), t));
  const __m256d lo = _mm256_min_pd(b, a);
  const __m256d hi = _mm256_max_pd(b, a);
  return _mm256_min_pd(hi, _mm256_max_pd(lo, v));
}

void lerp_rows(const double* a, const double* b, double t, double* out, std::size_t n) {
  std::size_t i = 0;
  const __m256d tv = _mm256_set1_pd(t);
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, lerp_clamped(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), tv));
  }
  if (i < n) scalar_kernels().lerp_rows(a + i, b + i, t, out + i, n - i);
}

void lerp_gather(const double* src, const std::uint32_t* i0, const std::uint32_t* i1,
                 const double* frac, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i k0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(i0 + i));
    const __m128i k1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(i1 + i));
    const __m256d a = _mm256_i32gather_pd(src, k0, 8);
    const __m256d b = _mm256_i32gather_pd(src, k1, 8);
    _mm256_storeu_pd(out + i, lerp_clamped(a, b, _mm256_loadu_pd(frac + i)));
  }
  if (i < n) scalar_kernels().lerp_gather(src, i0 + i, i1 + i, frac + i, out + i, n - i);
}

double sum_sq_standardized(const double* x, const double* mean, const double* inv_sd,
                           const double* c, std::size_t n) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i)),
                                    _mm256_loadu_pd(inv_sd + i));
    const __m256d d = _mm256_sub_pd(z, _mm256_loadu_pd(c + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  if (i < n) total += scalar_kernels().sum_sq_standardized(x + i, mean + i, inv_sd + i, c + i, n - i);
  return total;
}

void standardize(const double* x, const double* mean, const double* inv_sd, double* out,
                 std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d z = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(mean + i)),
                                    _mm256_loadu_pd(inv_sd + i));
    _mm256_storeu_pd(out + i, z);
  }
  if (i < n) scalar_kernels().standardize(x + i, mean + i, inv_sd + i, out + i, n - i);
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{butterfly, window_real, power, lerp_rows,
                                 lerp_gather, sum_sq_standardized, standardize};
  return &table;
}

}  // namespace sstack::simd
