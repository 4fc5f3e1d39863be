#include "ssw/rng.hpp"

#include <cmath>
#include <numbers>

namespace ssw {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngState::RngState(std::uint64_t seed) : state_(mix64(seed + kGolden)) {}

std::uint64_t RngState::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngState::next_unit() {
  // (k + 0.5) / 2^53 with k in [0, 2^53): never exactly 0 or 1.
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngState::next_gaussian() {
  const double u1 = next_unit();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

RngState RngState::split(std::uint64_t label) const {
  RngState child(0);
  child.state_ = mix64(state_ ^ mix64(label + 0xD1B54A32D192ED03ull));
  return child;
}

}  // namespace ssw
