#pragma once

#include <cstdint>
#include <limits>

namespace strainforge {

// SplitMix64 (Steele, Lea, Flood 2014). Used as a counter-based source: every
// Monte Carlo sample gets its own generator derived from (seed, index), so
// results do not depend on how samples are split across threads.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline SplitMix64 sample_stream(std::uint64_t seed, std::uint64_t index) noexcept {
  SplitMix64 mix(seed);
  const std::uint64_t a = mix();
  SplitMix64 mix2(a ^ (index * 0xd1b54a32d192ed03ULL));
  return SplitMix64(mix2());
}

}  // namespace strainforge
