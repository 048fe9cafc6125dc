#include "lz/rng.hpp"

#include <cmath>

namespace lz {
namespace {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (0x6a09e667f3bcc909ULL + stream))) {}

CounterRng CounterRng::split(std::uint64_t substream) const {
  CounterRng r(key_, substream ^ 0x3c6ef372fe94f82bULL);
  return r;
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(key_ ^ splitmix64(counter * 0xd1342543de82ef95ULL + 1));
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t counter, double a, double b) const {
  return a + (b - a) * uniform(counter);
}

double CounterRng::normal(std::uint64_t counter) const {
  // Box-Muller on two decorrelated counters.
  double u1 = uniform(2 * counter);
  double u2 = uniform(2 * counter + 1);
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586232 * u2);
}

}  // namespace lz
