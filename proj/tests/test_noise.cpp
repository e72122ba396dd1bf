#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "rdsync/noise.hpp"

using namespace rdsync;
using nlohmann::json;

TEST_CASE("draws are deterministic in (seed, time, slot)") {
  const Scenario s = Scenario::from_hex("deadbeefcafebabe");
  const uint64_t first = draw_word(s, 0, 0);
  for (int i = 0; i < 10; ++i) CHECK(draw_word(s, 0, 0) == first);
  CHECK(draw_word(s, 0, 1) != first);
  CHECK(draw_word(s, 1, 0) != first);
  const Scenario copy{s.seed_hi, s.seed_lo, s.offset};
  CHECK(draw_word(copy, -17, 3) == draw_word(s, -17, 3));
}

TEST_CASE("golden vectors pin the mixing construction bit-exactly") {
  std::ifstream in(std::string(RDSYNC_SOURCE_DIR) + "/data/noise_vectors.json");
  REQUIRE(in.good());
  const json doc = json::parse(in);
  REQUIRE(doc.at("vectors").size() == 10);
  for (const auto& v : doc.at("vectors")) {
    const Scenario s = Scenario::from_hex(v.at("seed_hex").get<std::string>());
    const int64_t time = v.at("time").get<int64_t>();
    const uint64_t slot = v.at("slot").get<uint64_t>();
    const uint64_t want = std::stoull(v.at("word").get<std::string>(), nullptr, 16);
    CHECK(draw_word(s, time, slot) == want);
  }
}

TEST_CASE("shift group laws hold exactly") {
  const Scenario s = Scenario::from_hex("0123456789abcdef0123456789abcdef");
  CHECK(shift(s, 0) == s);
  CHECK(shift(shift(s, 2), -2) == s);
  CHECK(shift(shift(shift(s, 1), 1), 1) == shift(s, 3));
  for (int64_t n = -5; n <= 5; ++n) {
    for (uint64_t slot = 0; slot < 4; ++slot) {
      CHECK(draw_word(shift(s, 1), n, slot) == draw_word(s, n + 1, slot));
      CHECK(draw_word(shift(s, -7), n, slot) == draw_word(s, n - 7, slot));
    }
  }
}

TEST_CASE("offset overflow is a hard error") {
  Scenario s = Scenario::from_hex("1");
  s.offset = INT64_MAX - 1;
  CHECK_NOTHROW(shift(s, 1));
  CHECK_THROWS_AS(shift(s, 2), TimeOverflow);
  CHECK_THROWS_AS(draw_word(s, 2, 0), TimeOverflow);
  s.offset = INT64_MIN + 1;
  CHECK_THROWS_AS(shift(s, -2), TimeOverflow);
}

TEST_CASE("hex seed parsing round-trips and rejects junk") {
  CHECK(Scenario::from_hex("deadbeef").seed_lo == 0xdeadbeefULL);
  CHECK(Scenario::from_hex("deadbeef").seed_hi == 0);
  CHECK(Scenario::from_hex("0xDEADBEEF") == Scenario::from_hex("deadbeef"));
  const Scenario s = Scenario::from_hex("0123456789abcdeffedcba9876543210");
  CHECK(s.seed_hi == 0x0123456789abcdefULL);
  CHECK(s.seed_lo == 0xfedcba9876543210ULL);
  CHECK(Scenario::from_hex(s.seed_hex()) == s);
  CHECK_THROWS_AS(Scenario::from_hex(""), SpecError);
  CHECK_THROWS_AS(Scenario::from_hex("xyz"), SpecError);
  CHECK_THROWS_AS(Scenario::from_hex("0123456789abcdef0123456789abcdef0"), SpecError);
}

TEST_CASE("unit draws live in [0,1) with 2^16-sample uniformity smoke") {
  const Scenario s = Scenario::from_hex("5eed");
  const int n = 1 << 16;
  double sum = 0.0;
  std::vector<int> bins(256, 0);
  for (int i = 0; i < n; ++i) {
    const double u = draw_unit(s, i, 7);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    ++bins[static_cast<int>(u * 256.0)];
  }
  const double mean = sum / n;
  CHECK(mean > 0.49);
  CHECK(mean < 0.51);
  // Chi-square over 256 equal bins, 255 dof. p > 1e-6 iff the statistic is
  // below the 1 - 1e-6 quantile of chi2(255), which is 377.08.
  const double expected = static_cast<double>(n) / 256.0;
  double chi2 = 0.0;
  for (int c : bins) {
    const double d = c - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 377.08);
}

TEST_CASE("measure preservation surrogate: statistic at {0..T} vs {k..T+k}") {
  // Statistic: mean of the draws in the window. Over 10^4 seeds the two
  // samples must be KS-indistinguishable at p > 1e-4.
  const int n_seeds = 10000;
  const int T = 8;
  const int k = 1000;
  const Scenario base = Scenario::from_hex("abc123");
  std::vector<double> at_zero, at_k;
  at_zero.reserve(n_seeds);
  at_k.reserve(n_seeds);
  for (int i = 0; i < n_seeds; ++i) {
    const Scenario s = base.substream(i);
    double a = 0.0, b = 0.0;
    for (int t = 0; t <= T; ++t) {
      a += draw_unit(s, t, 2);
      b += draw_unit(s, k + t, 2);
    }
    at_zero.push_back(a / (T + 1));
    at_k.push_back(b / (T + 1));
  }
  std::sort(at_zero.begin(), at_zero.end());
  std::sort(at_k.begin(), at_k.end());
  double d = 0.0;
  size_t i = 0, j = 0;
  while (i < at_zero.size() && j < at_k.size()) {
    if (at_zero[i] <= at_k[j]) ++i; else ++j;
    const double cdf_a = static_cast<double>(i) / n_seeds;
    const double cdf_b = static_cast<double>(j) / n_seeds;
    d = std::max(d, std::abs(cdf_a - cdf_b));
  }
  // Two-sample KS critical value at alpha = 1e-4: c(alpha) sqrt(2/n) with
  // c = sqrt(-ln(alpha/2)/2) = 2.2254.
  CHECK(d < 2.2254 * std::sqrt(2.0 / n_seeds));
}

TEST_CASE("substreams are distinct and commute with shift") {
  const Scenario base = Scenario::from_hex("42");
  const Scenario a = base.substream(0);
  const Scenario b = base.substream(1);
  CHECK(a != b);
  CHECK(a != base);
  CHECK(draw_word(a, 0, 0) != draw_word(b, 0, 0));
  CHECK(shift(base, 5).substream(3).seed_hi == base.substream(3).seed_hi);
  CHECK(shift(base, 5).substream(3).seed_lo == base.substream(3).seed_lo);
}

TEST_CASE("random scenarios differ between calls") {
  const Scenario a = random_scenario();
  const Scenario b = random_scenario();
  CHECK(a != b);  // 2^-128 false-failure probability
}
