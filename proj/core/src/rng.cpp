#include "cits/rng.hpp"

namespace cits {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : seed_(seed), key_(splitmix64_mix(seed ^ splitmix64_mix(fnv1a64(label)))) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  const double u = uniform01();
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * u;
  return v > hi ? hi : v;
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) {
    next_u64();
    return false;
  }
  if (p >= 1.0) {
    next_u64();
    return true;
  }
  return uniform01() < p;
}

}  // namespace cits
