#include "easp/rng.h"

namespace easp {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Rng::next_double() {
  // Top 53 bits -> [0, 1).
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

int Rng::categorical(std::span<const double> probs) {
  const double r = next_double();
  double cum = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (r < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

Rng Rng::substream(uint64_t seed, uint64_t stream) {
  return Rng(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ mix64(stream ^ 0xD6E8FEB86659FD93ULL));
}

}  // namespace easp
