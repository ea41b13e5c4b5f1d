#include "pileup/random.hpp"

namespace pileup {

std::uint64_t mix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::uint64_t substream)
{
  return mix64(mix64(mix64(master) ^ index) ^ (substream * 0xd1b54a32d192ed03ULL));
}

std::uint64_t RandomStream::index(std::uint64_t bound)
{
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) {
      return x % bound;
    }
  }
}

} // namespace pileup
