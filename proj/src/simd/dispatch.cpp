#include <cstdlib>
#include <string_view>

#include "sstack/simd/kernels.hpp"

namespace sstack::simd {

#ifndef SSTACK_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Backend select_backend() {
  if (const char* env = std::getenv("SSTACK_SIMD"); env && std::string_view(env) == "scalar") {
    return Backend::Scalar;
  }
  if (avx2_kernels() != nullptr && cpu_has_avx2()) return Backend::Avx2;
  return Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend backend = select_backend();
  return backend;
}

const KernelTable& kernels_for(Backend b) {
  if (b == Backend::Avx2 && avx2_kernels() != nullptr && cpu_has_avx2()) return *avx2_kernels();
  return scalar_kernels();
}

const KernelTable& kernels() {
  static const KernelTable& table = kernels_for(active_backend());
  return table;
}

}  // namespace sstack::simd
