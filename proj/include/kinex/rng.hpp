#pragma once

#include <array>
#include <cstdint>

namespace kinex {

// Deterministic random stream: xoshiro256** seeded through splitmix64.
//
// The generator, the seeding procedure and the conversions to doubles and
// bounded integers are all defined here bit for bit, so a given seed yields
// the same sequence on every platform and compiler.
//
// Substreams: run k of an ensemble with master seed s is seeded with
//   substream_seed(s, k) = fmix64(fmix64(s) + k * 0x9E3779B97F4A7C15)
// where fmix64 is the splitmix64 output finalizer. fmix64 is a bijection and
// the golden-ratio increment is odd, so distinct run indices under one master
// seed always get distinct stream seeds.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed = 0);

  static RandomStream substream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer on [0, n). Lemire's multiply-and-reject; n must be > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  const std::array<std::uint64_t, 4>& state() const { return s_; }

  bool operator==(const RandomStream&) const = default;

private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

std::uint64_t fmix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index);

}  // namespace kinex
