#include <cstring>
#include <random>
#include <vector>

#include "doctest.h"
#include "sstack/simd/kernels.hpp"

using namespace sstack::simd;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng, double lo = -100.0, double hi = 100.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<Complex> random_cvec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& x : v) x = Complex(d(rng), d(rng));
  return v;
}

template <class T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

const KernelTable* simd_or_skip() {
  const KernelTable* k = avx2_kernels();
  if (k == nullptr || !cpu_has_avx2()) {
    MESSAGE("AVX2 kernels unavailable on this build/CPU; equivalence checks skipped");
    return nullptr;
  }
  return k;
}

// Lengths that exercise the vector body, the scalar tail, and both at once.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 13, 64, 257, 1025};

}  // namespace

TEST_CASE("dispatch reports a usable backend") {
  const Backend b = active_backend();
  CHECK((b == Backend::Scalar || b == Backend::Avx2));
  CHECK(&kernels_for(Backend::Scalar) == &scalar_kernels());
}

TEST_CASE("butterfly: AVX2 matches scalar bit for bit") {
  const KernelTable* v = simd_or_skip();
  if (!v) return;
  std::mt19937_64 rng(1);
  for (std::size_t n : kLengths) {
    const auto lo = random_cvec(n, rng), hi = random_cvec(n, rng), tw = random_cvec(n, rng);
    auto lo_s = lo, hi_s = hi, lo_v = lo, hi_v = hi;
    scalar_kernels().butterfly(lo_s.data(), hi_s.data(), tw.data(), n);
    v->butterfly(lo_v.data(), hi_v.data(), tw.data(), n);
    CHECK(bit_equal(lo_s, lo_v));
    CHECK(bit_equal(hi_s, hi_v));
  }
}

TEST_CASE("window_real and power: AVX2 matches scalar bit for bit") {
  const KernelTable* v = simd_or_skip();
  if (!v) return;
  std::mt19937_64 rng(2);
  for (std::size_t n : kLengths) {
    const auto x = random_vec(n, rng), w = random_vec(n, rng, 0.0, 1.0);
    std::vector<Complex> a(n), b(n);
    scalar_kernels().window_real(x.data(), w.data(), a.data(), n);
    v->window_real(x.data(), w.data(), b.data(), n);
    CHECK(bit_equal(a, b));

    const auto c = random_cvec(n, rng);
    std::vector<double> p(n), q(n);
    scalar_kernels().power(c.data(), p.data(), n);
    v->power(c.data(), q.data(), n);
    CHECK(bit_equal(p, q));
  }
}

TEST_CASE("lerp kernels: AVX2 matches scalar bit for bit and stays inside the endpoints") {
  const KernelTable* v = simd_or_skip();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : kLengths) {
    const auto a = random_vec(n, rng), b = random_vec(n, rng);
    const double t = unit(rng);
    std::vector<double> s(n), w(n);
    scalar_kernels().lerp_rows(a.data(), b.data(), t, s.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(s[i] >= std::min(a[i], b[i]));
      CHECK(s[i] <= std::max(a[i], b[i]));
    }
    if (v) {
      v->lerp_rows(a.data(), b.data(), t, w.data(), n);
      CHECK(bit_equal(s, w));
    }

    const auto src = random_vec(n + 2, rng);
    std::vector<std::uint32_t> i0(n), i1(n);
    std::vector<double> frac(n);
    for (std::size_t i = 0; i < n; ++i) {
      i0[i] = static_cast<std::uint32_t>(rng() % (n + 1));
      i1[i] = i0[i] + 1;
      frac[i] = unit(rng);
    }
    std::vector<double> gs(n), gv(n);
    scalar_kernels().lerp_gather(src.data(), i0.data(), i1.data(), frac.data(), gs.data(), n);
    if (v) {
      v->lerp_gather(src.data(), i0.data(), i1.data(), frac.data(), gv.data(), n);
      CHECK(bit_equal(gs, gv));
    }
  }
}

TEST_CASE("standardization kernels: AVX2 matches scalar") {
  const KernelTable* v = simd_or_skip();
  if (!v) return;
  std::mt19937_64 rng(4);
  for (std::size_t n : kLengths) {
    const auto x = random_vec(n, rng), mean = random_vec(n, rng), inv = random_vec(n, rng, 0.0, 2.0),
               c = random_vec(n, rng, -3.0, 3.0);
    std::vector<double> zs(n), zv(n);
    scalar_kernels().standardize(x.data(), mean.data(), inv.data(), zs.data(), n);
    v->standardize(x.data(), mean.data(), inv.data(), zv.data(), n);
    CHECK(bit_equal(zs, zv));

    // Reduction order differs between backends; agreement is to rounding.
    const double ds = scalar_kernels().sum_sq_standardized(x.data(), mean.data(), inv.data(), c.data(), n);
    const double dv = v->sum_sq_standardized(x.data(), mean.data(), inv.data(), c.data(), n);
    CHECK(dv == doctest::Approx(ds).epsilon(1e-12));
  }
}
