#include <doctest.h>

#include <algorithm>
#include <vector>

#include "rdsync/examples.hpp"
#include "rdsync/two_point.hpp"

using namespace rdsync;

namespace {

Scenario scenario_selecting(const RdsRepresentation& rds, int64_t time, int map_index) {
  const Scenario base = Scenario::from_hex("bee");
  for (uint64_t i = 0; i < 1000; ++i) {
    const Scenario s = base.substream(i);
    if (rds.selected_map(s, time) == map_index) return s;
  }
  FAIL("no substream selects the requested map");
  return base;
}

ChainSpec two_cycle() {
  ChainSpec spec;
  spec.states = {"a", "b"};
  spec.transitions = {{"a", "b", 1.0}, {"b", "a", 1.0}};
  return spec;
}

}  // namespace

TEST_CASE("two-point kernel entries: explicit and independent couplings") {
  // Epsilon-coupled family: the pair (a,b) coalesces into (a,a) only via the
  // collapse-onto-a map of probability eps/2.
  const double eps = 0.2;
  const auto q_eps = TwoPointKernel::build(epsilon_two_state(eps));
  CHECK(q_eps.prob(q_eps.pair_index(0, 1), q_eps.pair_index(0, 0)) ==
        doctest::Approx(eps / 2).epsilon(1e-12));

  // Independent coupling of the all-half 2-state chain: product of the two
  // marginals, 1/2 * 1/2.
  ChainSpec half;
  half.states = {"a", "b"};
  half.transitions = {{"a", "a", 0.5}, {"a", "b", 0.5}, {"b", "a", 0.5}, {"b", "b", 0.5}};
  const auto q_ind =
      TwoPointKernel::build(RdsRepresentation::make_independent(TransitionKernel::validate(half)));
  CHECK(q_ind.prob(q_ind.pair_index(0, 1), q_ind.pair_index(0, 0)) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("two-point kernel rows are stochastic and fix the diagonal") {
  for (const RdsRepresentation& rds :
       {four_state_f1f2(), four_state_independent(), epsilon_two_state(0.1)}) {
    const auto q = TwoPointKernel::build(rds);
    const int n = q.n_states();
    for (int p = 0; p < q.n_pairs(); ++p) {
      double sum = 0.0;
      for (const auto& e : q.row(p)) sum += e.prob;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int x = 0; x < n; ++x) {
      for (const auto& e : q.row(q.pair_index(x, x))) {
        auto [u, v] = q.pair_of(e.target);
        CHECK(u == v);
      }
    }
  }
}

TEST_CASE("pair cap rejects oversized products") {
  CHECK_THROWS_AS(TwoPointKernel::build(four_state_independent(), 8), StateSpaceTooLarge);
}

TEST_CASE("insulation relation: f1/f2 diagonals, independent none, 2-cycle pair") {
  const auto s_f = insulation_relation(TwoPointKernel::build(four_state_f1f2()));
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const bool expect = (x + 2) % 4 == y % 4 && x != y;  // a||c and b||d only
      CHECK(s_f.insulated(x, y) == expect);
      CHECK(s_f.insulated(x, y) == s_f.insulated(y, x));
    }
    CHECK_FALSE(s_f.insulated(x, x));
  }

  const auto s_i = insulation_relation(TwoPointKernel::build(four_state_independent()));
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) CHECK_FALSE(s_i.insulated(x, y));
  }

  const auto rds2 = RdsRepresentation::make_independent(TransitionKernel::validate(two_cycle()));
  const auto s_c = insulation_relation(TwoPointKernel::build(rds2));
  CHECK(s_c.insulated(0, 1));  // opposite periodic classes never meet
  CHECK(s_c.kappa_hat == 2);
}

TEST_CASE("delta set absorbs under the two-point kernel") {
  for (const RdsRepresentation& rds : {four_state_f1f2(), epsilon_two_state(0.25)}) {
    const auto q = TwoPointKernel::build(rds);
    const auto s = insulation_relation(q);
    for (int pair : s.delta_pairs) {
      for (const auto& e : q.row(pair)) {
        auto [x, y] = q.pair_of(e.target);
        CHECK(s.in_delta(x, y));
      }
    }
  }
}

TEST_CASE("maximum insulated set: clique sizes and deterministic witness") {
  const auto s_f = insulation_relation(TwoPointKernel::build(four_state_f1f2()));
  CHECK(s_f.kappa_hat == 2);
  CHECK(s_f.witness == std::vector<int>{0, 2});  // {a, c}, lexicographically first

  const auto s_i = insulation_relation(TwoPointKernel::build(four_state_independent()));
  CHECK(s_i.kappa_hat == 1);
  CHECK(s_i.witness.size() == 1);

  const std::vector<std::vector<bool>> complete = {
      {false, true, true}, {true, false, true}, {true, true, false}};
  const auto [k, witness] = maximum_insulated_set(complete);
  CHECK(k == 3);
  CHECK(witness == std::vector<int>{0, 1, 2});

  // Two disjoint maximum cliques {0,2} and {1,3}: the reported witness must
  // be the lexicographically smaller one.
  std::vector<std::vector<bool>> twin(4, std::vector<bool>(4, false));
  twin[0][2] = twin[2][0] = twin[1][3] = twin[3][1] = true;
  CHECK(maximum_insulated_set(twin).second == std::vector<int>{0, 2});
}

TEST_CASE("kappa partition feasibility") {
  StationaryDistribution uniform4{{0.25, 0.25, 0.25, 0.25}, 0.0};
  const auto f = kappa_partition_feasible(uniform4, 2);
  REQUIRE(f.status == PartitionFeasibility::Status::Feasible);
  REQUIRE(f.witness.size() == 2);
  for (const auto& block : f.witness) {
    double mass = 0.0;
    for (int x : block) mass += uniform4.mass[x];
    CHECK(mass == doctest::Approx(0.5).epsilon(1e-9));
  }

  StationaryDistribution skew{{0.5, 0.3, 0.2}, 0.0};
  CHECK(kappa_partition_feasible(skew, 3).status == PartitionFeasibility::Status::Infeasible);
  CHECK(kappa_partition_feasible(skew, 1).status == PartitionFeasibility::Status::Feasible);
  CHECK(kappa_partition_feasible(skew, 1).witness[0] == std::vector<int>{0, 1, 2});

  StationaryDistribution big{std::vector<double>(30, 1.0 / 30.0), 0.0};
  CHECK(kappa_partition_feasible(big, 2).status == PartitionFeasibility::Status::Undecided);
}

TEST_CASE("synchronizing classes of the f1/f2 representation") {
  const RdsRepresentation rds = four_state_f1f2();
  const auto structure = insulation_relation(TwoPointKernel::build(rds));
  const auto pi = stationary_distribution(rds.kernel());
  const int64_t horizon = default_sync_horizon(rds.n_states());

  // omega_0 = f1 merges a with b and c with d immediately.
  const auto with_f1 =
      synchronizing_classes(rds, structure, pi, scenario_selecting(rds, 0, 0), horizon);
  REQUIRE(with_f1.classes.size() == 2);
  CHECK(with_f1.classes[0] == std::vector<int>{0, 1});
  CHECK(with_f1.classes[1] == std::vector<int>{2, 3});

  // omega_0 = f2 merges b with c and d with a.
  const auto with_f2 =
      synchronizing_classes(rds, structure, pi, scenario_selecting(rds, 0, 1), horizon);
  REQUIRE(with_f2.classes.size() == 2);
  CHECK(with_f2.classes[0] == std::vector<int>{0, 3});
  CHECK(with_f2.classes[1] == std::vector<int>{1, 2});

  for (double m : with_f1.class_mass) CHECK(m == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("class count equals kappa-hat across scenarios, mass 1/kappa") {
  const Scenario base = Scenario::from_hex("5ca1e");
  for (const RdsRepresentation& rds : {four_state_f1f2(), four_state_independent()}) {
    const auto structure = insulation_relation(TwoPointKernel::build(rds));
    const auto pi = stationary_distribution(rds.kernel());
    const int64_t horizon = default_sync_horizon(rds.n_states());
    for (int i = 0; i < 200; ++i) {
      const auto sc = synchronizing_classes(rds, structure, pi, base.substream(i), horizon);
      REQUIRE(static_cast<int>(sc.classes.size()) == structure.kappa_hat);
      for (double m : sc.class_mass) {
        CHECK(m == doctest::Approx(1.0 / structure.kappa_hat).epsilon(1e-9));
      }
    }
  }
}
