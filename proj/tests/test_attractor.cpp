#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rdsync/attractor.hpp"
#include "rdsync/examples.hpp"

using namespace rdsync;

namespace {

Scenario scenario_selecting(const RdsRepresentation& rds, int64_t time, int map_index) {
  const Scenario base = Scenario::from_hex("a77");
  for (uint64_t i = 0; i < 1000; ++i) {
    const Scenario s = base.substream(i);
    if (rds.selected_map(s, time) == map_index) return s;
  }
  FAIL("no substream selects the requested map");
  return base;
}

RdsRepresentation one_state_rds() {
  ChainSpec spec;
  spec.states = {"s"};
  spec.transitions = {{"s", "s", 1.0}};
  return RdsRepresentation::make_independent(TransitionKernel::validate(spec));
}

}  // namespace

TEST_CASE("pullback attractor of the f1/f2 representation follows the last map") {
  const RdsRepresentation rds = four_state_f1f2();
  const auto structure = insulation_relation(TwoPointKernel::build(rds));

  const auto with_f2 = pullback_attractor(rds, structure, scenario_selecting(rds, -1, 1));
  CHECK(with_f2.attractor == std::vector<int>{0, 2});  // {a, c}
  CHECK(with_f2.steps == 1);

  const auto with_f1 = pullback_attractor(rds, structure, scenario_selecting(rds, -1, 0));
  CHECK(with_f1.attractor == std::vector<int>{1, 3});  // {b, d}
}

TEST_CASE("one-state chain: singleton attractor after one step") {
  const RdsRepresentation rds = one_state_rds();
  const auto structure = insulation_relation(TwoPointKernel::build(rds));
  const auto r = pullback_attractor(rds, structure, Scenario::from_hex("1"));
  CHECK(r.attractor == std::vector<int>{0});
  CHECK(r.steps == 1);
}

TEST_CASE("every computed attractor is pairwise insulated with |A| = kappa-hat") {
  const Scenario base = Scenario::from_hex("a17ac");
  for (const RdsRepresentation& rds : {four_state_f1f2(), four_state_independent()}) {
    const auto structure = insulation_relation(TwoPointKernel::build(rds));
    for (int i = 0; i < 300; ++i) {
      const auto r = pullback_attractor(rds, structure, base.substream(i));
      REQUIRE(static_cast<int>(r.attractor.size()) == structure.kappa_hat);
      CHECK(structure.pairwise_insulated(r.attractor));
    }
  }
}

TEST_CASE("estimate_kappa: constant cardinality and membership bookkeeping") {
  const Scenario base = Scenario::from_hex("e57");
  const RdsRepresentation ind = four_state_independent();
  const auto s_ind = insulation_relation(TwoPointKernel::build(ind));
  const auto rep1 = estimate_kappa(ind, s_ind, base, 500);
  CHECK(rep1.kappa == 1);
  CHECK_FALSE(rep1.mixed_cardinality);
  CHECK(rep1.cardinality_histogram.at(1) == 500);
  double total = 0.0;
  for (double m : rep1.membership) {
    CHECK(m >= 0.0);
    CHECK(m <= 1.0);
    total += m;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));  // frequencies sum to kappa

  const RdsRepresentation f = four_state_f1f2();
  const auto s_f = insulation_relation(TwoPointKernel::build(f));
  const auto rep2 = estimate_kappa(f, s_f, base, 500);
  CHECK(rep2.kappa == 2);
  CHECK(rep2.cardinality_histogram.at(2) == 500);
}

TEST_CASE("estimate_kappa is independent of the thread count") {
  const Scenario base = Scenario::from_hex("bb");
  const RdsRepresentation rds = four_state_f1f2();
  const auto structure = insulation_relation(TwoPointKernel::build(rds));
  const auto serial = estimate_kappa(rds, structure, base, 400, kDefaultMaxBack, 1);
  const auto parallel = estimate_kappa(rds, structure, base, 400, kDefaultMaxBack, 4);
  CHECK(serial.kappa == parallel.kappa);
  CHECK(serial.membership == parallel.membership);
  CHECK(serial.cardinality_histogram == parallel.cardinality_histogram);
}

TEST_CASE("invariance: the stepped attractor equals the next pullback") {
  const Scenario base = Scenario::from_hex("1a4");
  for (const RdsRepresentation& rds :
       {four_state_f1f2(), four_state_independent(), one_state_rds()}) {
    const auto structure = insulation_relation(TwoPointKernel::build(rds));
    const auto report = verify_invariance(rds, structure, base.substream(7), 50);
    CHECK(report.n_checks == 50);
    CHECK(report.passed());
  }
}

TEST_CASE("forward attraction: every point enters the advancing attractor") {
  const Scenario base = Scenario::from_hex("f0a");
  const RdsRepresentation rds = four_state_independent();
  const auto structure = insulation_relation(TwoPointKernel::build(rds));
  for (int i = 0; i < 200; ++i) {
    const Scenario s = base.substream(i);
    auto attractor = pullback_attractor(rds, structure, s).attractor;
    for (int x = 0; x < rds.n_states(); ++x) {
      int point = x;
      auto set = attractor;
      bool entered = false;
      for (int64_t t = 0; t < 1000 && !entered; ++t) {
        if (std::find(set.begin(), set.end(), point) != set.end()) entered = true;
        point = rds.step_point(s, t, point);
        set = rds.step(s, t, set);
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
      }
      CHECK(entered);
    }
  }
}

TEST_CASE("cftp: trivial chain, refusal on kappa > 1, and distributional accuracy") {
  const RdsRepresentation one = one_state_rds();
  const auto s_one = insulation_relation(TwoPointKernel::build(one));
  CHECK(cftp_sample(one, s_one, Scenario::from_hex("2")) == 0);

  const RdsRepresentation f = four_state_f1f2();
  const auto s_f = insulation_relation(TwoPointKernel::build(f));
  CHECK_THROWS_AS(cftp_sample(f, s_f, Scenario::from_hex("3")), NotSynchronizing);

  const RdsRepresentation ind = four_state_independent();
  const auto s_ind = insulation_relation(TwoPointKernel::build(ind));
  const Scenario base = Scenario::from_hex("cf79");
  const int64_t n = 20000;
  std::vector<int64_t> counts(4, 0);
  for (int64_t i = 0; i < n; ++i) {
    ++counts[cftp_sample(ind, s_ind, base.substream(static_cast<uint64_t>(i)))];
  }
  double tv = 0.0;
  for (int64_t c : counts) {
    tv += std::abs(static_cast<double>(c) / n - 0.25);
  }
  CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("cftp agrees with the pullback singleton on the same scenario") {
  const RdsRepresentation ind = four_state_independent();
  const auto structure = insulation_relation(TwoPointKernel::build(ind));
  const Scenario base = Scenario::from_hex("d1d");
  for (int i = 0; i < 100; ++i) {
    const Scenario s = base.substream(i);
    const auto r = pullback_attractor(ind, structure, s);
    REQUIRE(r.attractor.size() == 1);
    CHECK(cftp_sample(ind, structure, s) == r.attractor[0]);
  }
}
