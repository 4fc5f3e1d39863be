#pragma once

#include <cstdint>

namespace ssw {

// Deterministic splittable random stream. The generator is splitmix64: cheap,
// passes BigCrush, and trivially forkable, which is what reproducible
// per-chain / per-datapoint substreams need. All samplers in the codebase are
// built on this so that a (seed, split-label) pair pins the entire stream,
// independent of any standard-library implementation details.
class RngState {
 public:
  RngState() : RngState(0) {}
  explicit RngState(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double strictly inside (0, 1), 53-bit resolution.
  double next_unit();

  // Standard normal via Box-Muller (no cached spare; keeps the stream a pure
  // function of the number of calls).
  double next_gaussian();

  // Derive an independent child stream keyed by `label`. Does not advance
  // this stream, so repeated splits with the same label are reproducible.
  [[nodiscard]] RngState split(std::uint64_t label) const;

 private:
  std::uint64_t state_;
};

}  // namespace ssw
