#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace sstack {

// Stable per-item seed: hash(master_seed, id, index). Independent of
// iteration order, so parallel workers reproduce sequential output.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view id, std::uint64_t index);

// Seeded generator that remembers its seed for provenance records.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);
  // Uniform integer on [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace sstack
