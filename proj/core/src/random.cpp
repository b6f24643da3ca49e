#include "pathreg/random.hpp"

#include <cmath>

namespace pathreg {

std::uint64_t CounterRng::uniform_int(std::uint64_t bound) {
  __extension__ typedef unsigned __int128 u128;
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double CounterRng::exponential() { return -std::log1p(-uniform01()); }

}  // namespace pathreg
