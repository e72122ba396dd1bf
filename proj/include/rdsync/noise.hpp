#pragma once

#include <cstdint>
#include <string>

#include "rdsync/errors.hpp"

namespace rdsync {

// Counter-based noise source. A Scenario is a 128-bit seed plus a signed
// time origin; the word drawn at (time, slot) is a pure function of
// (seed, offset + time, slot). No state is kept, so draws at negative
// times (needed for pullback compositions) cost the same as forward draws.
//
// The mixing construction is pinned by golden vectors in data/noise_vectors.json:
//   h = seed_hi
//   h = mix64(h ^ (seed_lo        * M))
//   h = mix64(h ^ (uint64(n)      * M))
//   h = mix64(h ^ (slot           * M))
// with M = 0x9e3779b97f4a7c15 and mix64 the 64-bit murmur3 finalizer.

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

struct Scenario {
  uint64_t seed_hi = 0;
  uint64_t seed_lo = 0;
  int64_t offset = 0;

  bool operator==(const Scenario&) const = default;

  // Seed of an independent stream, for scenario-per-seed Monte Carlo runs.
  // Derived from the raw seed only, so it commutes with shift().
  Scenario substream(uint64_t index) const;

  static Scenario from_hex(const std::string& hex);
  std::string seed_hex() const;
};

// Raw 64-bit word at (time, slot).
uint64_t draw_word(const Scenario& s, int64_t time, uint64_t slot);

// Same draw mapped to [0, 1) with 53 bits of precision.
double draw_unit(const Scenario& s, int64_t time, uint64_t slot);

// Displace the time origin by k: draw(shift(s, k), n, slot) == draw(s, n + k, slot).
// Group law holds exactly; overflow of the offset is a hard error.
Scenario shift(const Scenario& s, int64_t k);

// Fresh random seed from the OS, for --seed auto generation.
Scenario random_scenario();

// Slot discipline: slot 0 carries the per-step map selection of an explicit
// RDS; slots 1..|X| are per-state draws of the independent RDS; slot |X|+1
// is reserved for drawing pi-distributed initial states.
inline constexpr uint64_t kSlotMapSelect = 0;
inline constexpr uint64_t slot_for_state(int state_index) {
  return 1 + static_cast<uint64_t>(state_index);
}

}  // namespace rdsync
