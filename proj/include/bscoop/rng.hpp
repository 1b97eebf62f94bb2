#pragma once

#include <cstdint>
#include <random>

#include "bscoop/common.hpp"

namespace bscoop {

enum class StreamTag : std::uint64_t { kDrop = 1, kFading = 2, kError = 3 };

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent generator keyed by (seed, trial, tag, index).
///
/// The engine is std::mt19937_64 seeded with
///   mix64(mix64(mix64(mix64(seed) ^ trial) ^ tag) ^ index).
/// uniform() returns 1 - (x >> 11) * 2^-53, which lies in (0, 1].
/// complex_normal() uses two uniforms u1, u2:
///   r = sqrt(-ln u1), value = r * (cos 2*pi*u2, sin 2*pi*u2),
/// so E|value|^2 = 1.
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t trial, StreamTag tag,
            std::uint64_t index);

  double uniform();
  cplx complex_normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace bscoop
