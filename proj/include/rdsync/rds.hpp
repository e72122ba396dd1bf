#pragma once

#include <vector>

#include "rdsync/chain.hpp"
#include "rdsync/noise.hpp"

namespace rdsync {

// Finite family of total maps f: X -> X with selection probabilities;
// the explicit-representation analogue of a distribution over maps.
struct RandomMapDistribution {
  std::vector<std::vector<int>> maps;  // maps[i][x] = image of state x under f_i
  std::vector<double> probs;
};

enum class RdsKind { Explicit, Independent };

// A representation of a Markov chain whose one-step marginals reproduce the
// kernel. Explicit: one map per time step drawn from a finite family.
// Independent: each state's image is drawn independently from its kernel
// row, one noise slot per state, so that distinct points move independently
// until they coalesce.
class RdsRepresentation {
 public:
  static constexpr double kMarginalTol = 1e-10;

  // Validates that the map family's one-step marginals match the kernel.
  static RdsRepresentation make_explicit(RandomMapDistribution maps,
                                         TransitionKernel kernel);
  static RdsRepresentation make_independent(TransitionKernel kernel);

  RdsKind kind() const { return kind_; }
  const TransitionKernel& kernel() const { return kernel_; }
  const RandomMapDistribution& maps() const { return maps_; }
  int n_states() const { return kernel_.size(); }

  // Applies the time-one map at `time` to each point. Equal inputs yield
  // equal outputs, so coalescence is permanent.
  std::vector<int> step(const Scenario& scenario, int64_t time,
                        const std::vector<int>& points) const;
  int step_point(const Scenario& scenario, int64_t time, int point) const;

  // n-fold composition of step at times start_time .. start_time + n - 1.
  std::vector<int> evolve(const Scenario& scenario, int64_t start_time, int64_t n,
                          std::vector<int> points) const;
  int evolve_point(const Scenario& scenario, int64_t start_time, int64_t n,
                   int point) const;

  // Exact one-step marginal kernel recovered from the representation.
  TransitionKernel induced_kernel() const;

  // Index of the map selected at `time` (Explicit kind only).
  int selected_map(const Scenario& scenario, int64_t time) const;

 private:
  RdsRepresentation(RdsKind kind, RandomMapDistribution maps, TransitionKernel kernel)
      : kind_(kind), maps_(std::move(maps)), kernel_(std::move(kernel)) {}

  int independent_image(const Scenario& scenario, int64_t time, int state) const;

  RdsKind kind_;
  RandomMapDistribution maps_;
  TransitionKernel kernel_;
  std::vector<double> map_cdf_;  // cumulative probs, Explicit kind
};

// Inverse-CDF selection over (value, weights) in listed order. Shared by map
// selection, row sampling and pi-distributed initial draws.
int inverse_cdf_pick(double u, const std::vector<double>& cumulative);

std::vector<double> cumulative_sums(const std::vector<double>& probs);

}  // namespace rdsync
