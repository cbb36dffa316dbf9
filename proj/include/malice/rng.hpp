#ifndef MALICE_RNG_HPP
#define MALICE_RNG_HPP

#include <cstdint>
#include <random>

namespace malice {

using RngEngine = std::mt19937_64;

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t z);

/// Counter-based stream derivation: stream k of master seed s is an engine
/// seeded with splitmix64(s + (k+1) * 0x9E3779B97F4A7C15). Streams with
/// distinct (s, k) are independent for practical purposes, and serial and
/// parallel execution see identical draws.
RngEngine make_stream(std::uint64_t master_seed, std::uint64_t stream_id);

}  // namespace malice

#endif
