#include "rdsync/hitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace rdsync {

TimedSample sync_time(const RdsRepresentation& rds, const InsulationStructure& structure,
                      const Scenario& scenario, int x, int y, int64_t horizon) {
  int cx = x, cy = y;
  for (int64_t n = 0; n <= horizon; ++n) {
    if (cx == cy || structure.insulated(cx, cy)) return {n, false};
    auto next = rds.step(scenario, n, {cx, cy});
    cx = next[0];
    cy = next[1];
  }
  return {horizon, true};
}

TimedSample attractor_hit_time(const RdsRepresentation& rds,
                               const InsulationStructure& structure,
                               const Scenario& scenario, int x, int64_t horizon,
                               int64_t max_back) {
  std::vector<int> attractor =
      pullback_attractor(rds, structure, scenario, max_back).attractor;
  int point = x;
  for (int64_t n = 0; n <= horizon; ++n) {
    if (std::find(attractor.begin(), attractor.end(), point) != attractor.end()) {
      return {n, false};
    }
    // Advance both the point and the set with the same time-n map; by
    // invariance the stepped set is A(theta_{n+1} omega).
    std::vector<int> joint = attractor;
    joint.push_back(point);
    joint = rds.step(scenario, n, joint);
    point = joint.back();
    joint.pop_back();
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    attractor = std::move(joint);
  }
  return {horizon, true};
}

namespace {

int draw_pi_state(const StationaryDistribution& pi, const Scenario& scenario,
                  int n_states) {
  const uint64_t slot = slot_for_state(n_states);  // first slot past the state slots
  const double u = draw_unit(scenario, 0, slot);
  double acc = 0.0;
  for (int i = 0; i + 1 < n_states; ++i) {
    acc += pi.mass[i];
    if (u < acc) return i;
  }
  return n_states - 1;
}

}  // namespace

TimeEstimate expected_times(const RdsRepresentation& rds,
                            const InsulationStructure& structure,
                            const StationaryDistribution& pi, const HitMode& mode,
                            const Scenario& base, int64_t n_samples, int64_t horizon,
                            int threads) {
  TimeEstimate est;
  est.n_samples = n_samples;
  est.horizon = horizon;
  est.values.assign(n_samples, 0);
  est.censored_flags.assign(n_samples, false);

  threads = std::max(1, threads);
  std::atomic<int64_t> next_index{0};
  auto worker = [&] {
    for (;;) {
      const int64_t i = next_index.fetch_add(1);
      if (i >= n_samples) break;
      const Scenario scenario = base.substream(i);
      TimedSample sample;
      switch (mode.kind) {
        case HitMode::Kind::SyncPair:
          sample = sync_time(rds, structure, scenario, mode.x, mode.y, horizon);
          break;
        case HitMode::Kind::Hit:
          sample = attractor_hit_time(rds, structure, scenario, mode.x, horizon);
          break;
        case HitMode::Kind::PiAveragedHit: {
          const int x0 = draw_pi_state(pi, scenario, rds.n_states());
          sample = attractor_hit_time(rds, structure, scenario, x0, horizon);
          break;
        }
      }
      est.values[i] = sample.value;
      est.censored_flags[i] = sample.censored;
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double censored_sum = 0.0, uncensored_sum = 0.0, uncensored_sq = 0.0;
  int64_t n_uncensored = 0;
  for (int64_t i = 0; i < n_samples; ++i) {
    censored_sum += static_cast<double>(est.values[i]);
    if (!est.censored_flags[i]) {
      uncensored_sum += static_cast<double>(est.values[i]);
      uncensored_sq += static_cast<double>(est.values[i]) * est.values[i];
      ++n_uncensored;
    } else {
      ++est.n_censored;
    }
  }
  est.censored_mean = n_samples > 0 ? censored_sum / n_samples : 0.0;
  if (n_uncensored > 0) {
    est.uncensored_mean = uncensored_sum / n_uncensored;
    if (n_uncensored > 1) {
      const double var = (uncensored_sq - uncensored_sum * uncensored_sum / n_uncensored) /
                         (n_uncensored - 1);
      est.standard_error = std::sqrt(std::max(0.0, var) / n_uncensored);
    }
  }
  est.estimate_refused = est.n_censored * 2 > est.n_samples;

  std::vector<int64_t> sorted = est.values;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    if (sorted.empty()) return 0.0;
    const size_t idx = std::min(sorted.size() - 1,
                                static_cast<size_t>(q * (sorted.size() - 1) + 0.5));
    return static_cast<double>(sorted[idx]);
  };
  est.quantile_50 = quantile(0.5);
  est.quantile_90 = quantile(0.9);
  est.quantile_99 = quantile(0.99);
  return est;
}

}  // namespace rdsync
