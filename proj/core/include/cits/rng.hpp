#pragma once

#include <cstdint>
#include <string_view>

namespace cits {

// Deterministic random substream. The state is (key, counter) where the key
// is derived from the run seed and a consumer label, so two labels never
// share draws and adding a consumer leaves every other stream untouched.
// Output is bit-identical on every platform.
class RngStream {
 public:
  RngStream() : RngStream(0, "") {}
  RngStream(std::uint64_t seed, std::string_view label);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draws() const { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  // Uniform in [lo, hi]; returns lo exactly when lo == hi.
  double uniform(double lo, double hi);
  // True with probability p (p clamped to [0, 1]).
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64_mix(std::uint64_t x);

}  // namespace cits
