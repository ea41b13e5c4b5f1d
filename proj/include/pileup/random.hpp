#pragma once

#include <cstdint>
#include <random>

namespace pileup {

//! SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x);

//! Seed of an independent stream derived from (master, index, substream).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t substream = 0);

/*!
 * Deterministic 64-bit random source. Uniform variates are built from the raw
 * engine bits so results do not depend on the standard library's
 * distribution implementations.
 */
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed)
    : engine_(mix64(seed))
  {}

  static RandomStream for_replicate(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t substream = 0)
  {
    return RandomStream(stream_seed(master, index, substream));
  }

  std::uint64_t bits() { return engine_(); }

  //! Uniform on the open interval (0, 1).
  double uniform_open()
  {
    return (double(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  //! Uniform index in [0, bound).
  std::uint64_t index(std::uint64_t bound);

private:
  std::mt19937_64 engine_;
};

} // namespace pileup
