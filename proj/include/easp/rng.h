#pragma once

#include <cstdint>
#include <span>

namespace easp {

// Deterministic PRNG: splitmix64 (64-bit state advanced by the golden-ratio
// constant, three xor-multiply finalizer rounds). All randomness in the
// project flows through this type so trajectories and checkpoints reproduce
// bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  double next_double();                  // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);  // [lo, hi)

  // Categorical draw by cumulative walk over probs; probs must sum to ~1.
  int categorical(std::span<const double> probs);

  // Stream derived purely from (seed, stream): both inputs pass through the
  // splitmix64 finalizer before combining, so neighbouring streams do not
  // share state windows.
  static Rng substream(uint64_t seed, uint64_t stream);

 private:
  uint64_t state_;
};

}  // namespace easp
