#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rdsync/attractor.hpp"

namespace rdsync {

inline constexpr int64_t kDefaultHitHorizon = 100'000;

// A resolved time or a censored observation at the horizon.
struct TimedSample {
  int64_t value = 0;
  bool censored = false;
};

// First n with coalescence or Delta-membership of the evolved pair; n = 0
// when x == y or x || y already holds.
TimedSample sync_time(const RdsRepresentation& rds, const InsulationStructure& structure,
                      const Scenario& scenario, int x, int y, int64_t horizon);

// First n with phi^n(x) in A(theta_n omega). The attractor is advanced
// forward via invariance instead of recomputing pullbacks at every step.
TimedSample attractor_hit_time(const RdsRepresentation& rds,
                               const InsulationStructure& structure,
                               const Scenario& scenario, int x, int64_t horizon,
                               int64_t max_back = kDefaultMaxBack);

struct HitMode {
  enum class Kind { SyncPair, Hit, PiAveragedHit };
  Kind kind = Kind::Hit;
  int x = 0;
  int y = 0;  // SyncPair only
};

struct TimeEstimate {
  int64_t n_samples = 0;
  int64_t n_censored = 0;
  int64_t horizon = 0;
  double censored_mean = 0.0;        // censored samples contribute `horizon`
  double uncensored_mean = 0.0;
  double standard_error = 0.0;       // over uncensored samples only
  double quantile_50 = 0.0;
  double quantile_90 = 0.0;
  double quantile_99 = 0.0;
  bool estimate_refused = false;     // censoring fraction above 1/2
  std::vector<int64_t> values;       // per-sample, censored at horizon
  std::vector<bool> censored_flags;
};

// Independent-seed Monte Carlo over substreams of `base`. PiAveragedHit draws
// the initial state by inverse CDF on pi from the dedicated noise slot.
TimeEstimate expected_times(const RdsRepresentation& rds,
                            const InsulationStructure& structure,
                            const StationaryDistribution& pi, const HitMode& mode,
                            const Scenario& base, int64_t n_samples, int64_t horizon,
                            int threads = 1);

}  // namespace rdsync
