#pragma once

#include <cstdint>
#include <vector>

#include "rdsync/rds.hpp"

namespace rdsync {

// Markov kernel on ordered state pairs modeling the joint motion of two
// trajectories under shared noise. Pair (x, y) has index x * n + y.
class TwoPointKernel {
 public:
  struct Entry {
    int target;  // pair index
    double prob;
  };

  static constexpr int64_t kDefaultPairCap = 1'000'000;

  static TwoPointKernel build(const RdsRepresentation& rds,
                              int64_t pair_cap = kDefaultPairCap);

  int n_states() const { return n_; }
  int n_pairs() const { return n_ * n_; }
  int pair_index(int x, int y) const { return x * n_ + y; }
  std::pair<int, int> pair_of(int index) const { return {index / n_, index % n_}; }
  const std::vector<Entry>& row(int pair) const { return rows_[pair]; }
  double prob(int from_pair, int to_pair) const;

 private:
  int n_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

// Symmetric irreflexive relation "x and y never coalesce", plus the derived
// quantities: size of a maximum insulated set and the absorbing pair set Delta.
struct InsulationStructure {
  int n_states = 0;
  std::vector<std::vector<bool>> relation;  // relation[x][y] == (x insulated from y)
  int kappa_hat = 1;
  std::vector<int> witness;                 // lexicographically smallest maximum insulated set
  std::vector<int> delta_pairs;             // pair indices with x == y or x || y

  bool insulated(int x, int y) const { return relation[x][y]; }
  bool in_delta(int x, int y) const { return x == y || relation[x][y]; }
  // True when every distinct pair of `points` is insulated.
  bool pairwise_insulated(const std::vector<int>& points) const;
};

// x || y iff no diagonal pair is reachable from (x, y) in the support
// digraph of Q. Exact graph reachability, no sampling.
InsulationStructure insulation_relation(const TwoPointKernel& q);

// Maximum clique in the insulation graph by branch and bound with pivoting.
// Returns (kappa_hat, lexicographically smallest witness clique).
std::pair<int, std::vector<int>> maximum_insulated_set(
    const std::vector<std::vector<bool>>& relation, int max_states = 64);

struct PartitionFeasibility {
  enum class Status { Feasible, Infeasible, Undecided };
  Status status = Status::Undecided;
  std::vector<std::vector<int>> witness;  // blocks, when feasible
};

// Can X be partitioned into k blocks of pi-mass 1/k each (within 1e-9)?
// Exact search for |X| <= 24, Undecided above.
PartitionFeasibility kappa_partition_feasible(const StationaryDistribution& pi, int k);

struct SynchronizingClasses {
  std::vector<std::vector<int>> classes;  // partition of X, each sorted
  std::vector<double> class_mass;         // pi-mass per class
};

// Scenario-dependent partition of X into synchronizing classes: states whose
// trajectories coalesce before the pair enters Delta share a class.
SynchronizingClasses synchronizing_classes(const RdsRepresentation& rds,
                                           const InsulationStructure& structure,
                                           const StationaryDistribution& pi,
                                           const Scenario& scenario,
                                           int64_t horizon);

int64_t default_sync_horizon(int n_states);

}  // namespace rdsync
