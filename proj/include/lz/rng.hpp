#pragma once

#include <cstdint>

namespace lz {

// Counter-based RNG: stateless draws indexed by (stream, counter), so worker
// pools can consume disjoint substreams without shared mutable state and runs
// stay reproducible for a fixed seed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  CounterRng split(std::uint64_t substream) const;

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;                  // [0,1)
  double uniform(std::uint64_t counter, double a, double b) const;
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t key_;
};

}  // namespace lz
