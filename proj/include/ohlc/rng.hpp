#pragma once

#include <cstdint>
#include <random>

namespace ohlc {

// Seeded standard-normal stream. Marsaglia polar draws on top of the
// (fully specified) mt19937_64 stream, so a seed pins the exact sequence
// independent of library distribution internals.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform01();  // in [0, 1)
  double next();       // standard normal

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ohlc
