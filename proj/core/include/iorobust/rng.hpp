#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace iorobust {

// Purposes that own an independent random stream. Values are part of the
// reproducibility contract: never renumber, only append.
enum class Stream : std::uint64_t {
  ConstraintMatrix = 1,
  GroundTruth = 2,
  TrainPoint = 3,       // index = k
  ValidationPoint = 4,  // index = l
  ReferenceNoise = 5,
  Instance = 6,         // test and acceptance instance generators
};

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed of the (purpose, index) stream derived from a run seed:
//   splitmix64(splitmix64(splitmix64(seed) ^ purpose) ^ index)
constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream purpose, std::uint64_t index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(purpose)) ^ index);
}

// mt19937_64 on a derived stream. Floating-point draws are built from raw 64-bit
// output so they do not depend on the standard library's distribution classes.
class Rng {
 public:
  Rng(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) : engine_(stream_seed(seed, purpose, index)) {}

  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard exponential via inversion; 1 - u lies in (0, 1].
  double exponential() { return -std::log1p(-uniform()); }
  // Integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace iorobust
