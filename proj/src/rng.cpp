#include "bscoop/rng.hpp"

#include <cmath>
#include <numbers>

namespace bscoop {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Substream::Substream(std::uint64_t seed, std::uint64_t trial, StreamTag tag,
                     std::uint64_t index) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ trial);
  s = mix64(s ^ static_cast<std::uint64_t>(tag));
  s = mix64(s ^ index);
  engine_.seed(s);
}

double Substream::uniform() {
  return 1.0 - static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

cplx Substream::complex_normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace bscoop
