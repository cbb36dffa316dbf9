#include "malice/rng.hpp"

namespace malice {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngEngine make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngEngine(
      splitmix64(master_seed + (stream_id + 1) * 0x9E3779B97F4A7C15ULL));
}

}  // namespace malice
