#include "rdsync/noise.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace rdsync {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Substream derivation uses two fixed tweak constants so that the derived
// seed halves never collide with regular (time, slot) draws.
constexpr uint64_t kSubstreamHi = 0x5368696674537232ULL;
constexpr uint64_t kSubstreamLo = 0x4e6f697365537562ULL;

uint64_t mix_inputs(uint64_t seed_hi, uint64_t seed_lo, uint64_t n, uint64_t slot) {
  uint64_t h = seed_hi;
  h = mix64(h ^ (seed_lo * kGolden));
  h = mix64(h ^ (n * kGolden));
  h = mix64(h ^ (slot * kGolden));
  return h;
}

int64_t checked_add(int64_t a, int64_t b) {
  int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw TimeOverflow("signed 64-bit time index overflow");
  }
  return out;
}

}  // namespace

uint64_t draw_word(const Scenario& s, int64_t time, uint64_t slot) {
  const int64_t n = checked_add(s.offset, time);
  return mix_inputs(s.seed_hi, s.seed_lo, static_cast<uint64_t>(n), slot);
}

double draw_unit(const Scenario& s, int64_t time, uint64_t slot) {
  return static_cast<double>(draw_word(s, time, slot) >> 11) * 0x1.0p-53;
}

Scenario shift(const Scenario& s, int64_t k) {
  return Scenario{s.seed_hi, s.seed_lo, checked_add(s.offset, k)};
}

Scenario Scenario::substream(uint64_t index) const {
  Scenario out;
  out.seed_hi = mix_inputs(seed_hi, seed_lo, index, kSubstreamHi);
  out.seed_lo = mix_inputs(seed_hi, seed_lo, index, kSubstreamLo);
  out.offset = 0;
  return out;
}

Scenario Scenario::from_hex(const std::string& hex) {
  std::string h = hex;
  if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
  if (h.empty() || h.size() > 32 ||
      h.find_first_not_of("0123456789abcdefABCDEF") != std::string::npos) {
    throw SpecError("BadSeed", "seed must be 1..32 hex digits, got '" + hex + "'");
  }
  // Right-align into 128 bits.
  std::string padded = std::string(32 - h.size(), '0') + h;
  Scenario s;
  s.seed_hi = std::stoull(padded.substr(0, 16), nullptr, 16);
  s.seed_lo = std::stoull(padded.substr(16), nullptr, 16);
  return s;
}

std::string Scenario::seed_hex() const {
  std::ostringstream os;
  os << std::hex << std::nouppercase;
  os.width(16);
  os.fill('0');
  os << seed_hi;
  os.width(16);
  os << seed_lo;
  return os.str();
}

Scenario random_scenario() {
  std::random_device rd;
  auto word = [&rd] {
    return (static_cast<uint64_t>(rd()) << 32) ^ static_cast<uint64_t>(rd());
  };
  return Scenario{word(), word(), 0};
}

}  // namespace rdsync
