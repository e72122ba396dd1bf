#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rdsync/two_point.hpp"

namespace rdsync {

inline constexpr int64_t kDefaultMaxBack = 1'000'000;

struct PullbackResult {
  std::vector<int> attractor;  // sorted state indices, anchored at time 0
  int64_t steps = 0;           // backward depth at which the stop rule fired
};

// Computes A(omega) by backward composition: K_n = evolve(-n, n, X) is a
// nested decreasing family, and the first K_n that is pairwise insulated
// equals the attractor. For kappa = 1 this is the classical CFTP singleton
// test; the insulated stop makes it exact for kappa > 1 as well.
PullbackResult pullback_attractor(const RdsRepresentation& rds,
                                  const InsulationStructure& structure,
                                  const Scenario& scenario,
                                  int64_t max_back = kDefaultMaxBack);

struct AttractorReport {
  int kappa = 0;                          // modal cardinality over scenarios
  bool mixed_cardinality = false;         // true signals a bug or non-convergence
  std::map<int, int64_t> cardinality_histogram;
  std::vector<double> membership;         // empirical P(x in A(omega)) per state
  int64_t n_scenarios = 0;
};

// Pullback over n_scenarios independent substreams of `base`.
// Throws MixedCardinality if cardinalities disagree (never a valid outcome).
AttractorReport estimate_kappa(const RdsRepresentation& rds,
                               const InsulationStructure& structure,
                               const Scenario& base, int64_t n_scenarios,
                               int64_t max_back = kDefaultMaxBack, int threads = 1);

struct InvarianceReport {
  int64_t n_checks = 0;
  int64_t n_failures = 0;
  bool passed() const { return n_failures == 0; }
};

// Verifies phi_omega(A(omega)) == A(theta omega) over consecutive time steps,
// with each side computed independently (pullback at k vs. stepped set).
InvarianceReport verify_invariance(const RdsRepresentation& rds,
                                   const InsulationStructure& structure,
                                   const Scenario& scenario, int64_t n_checks,
                                   int64_t max_back = kDefaultMaxBack);

// Coupling from the past: doubles the backward horizon until the image of X
// collapses to a single point. The counter-based noise reuses draws across
// overlapping windows by construction, which is required for unbiasedness.
// Only valid when kappa = 1; exactly pi-distributed output.
int cftp_sample(const RdsRepresentation& rds, const InsulationStructure& structure,
                const Scenario& scenario, int64_t max_back = kDefaultMaxBack);

}  // namespace rdsync
