#include "minkloss/rng.hpp"

#include <cmath>
#include <numbers>

#include "minkloss/errors.hpp"

namespace minkloss {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ed270b8a6f4c1dULL)));
}

std::uint64_t Rng::next_u64() { return engine_(); }

std::uint64_t Rng::bounded(std::uint64_t n) {
  if (n == 0) throw InvalidInput("Rng::bounded: n must be positive");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t threshold = (-n) % n;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % n;
  }
}

int Rng::index(int n) {
  if (n <= 0) throw InvalidInput("Rng::index: n must be positive");
  return static_cast<int>(bounded(static_cast<std::uint64_t>(n)));
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  double u1;
  do {
    u1 = uniform01();
  } while (u1 == 0.0);
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace minkloss
