#pragma once

#include <cstdint>
#include <random>

namespace minkloss {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded deterministic random source. Every stochastic operation in the
// library takes one of these explicitly; independent streams (per run, per
// grid cell) come from split(), never from sharing an engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derives an independent stream, deterministic in (seed, stream).
  Rng split(std::uint64_t stream) const;

  std::uint64_t next_u64();
  std::uint64_t bounded(std::uint64_t n);  // unbiased draw from [0, n)
  int index(int n);                        // bounded() for container indices
  double uniform01();                      // [0, 1)
  double uniform(double lo, double hi);
  double normal();                         // standard normal

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace minkloss
