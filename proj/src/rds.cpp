#include "rdsync/rds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rdsync {

std::vector<double> cumulative_sums(const std::vector<double>& probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = std::max(cdf.back(), 1.0);
  return cdf;
}

int inverse_cdf_pick(double u, const std::vector<double>& cumulative) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<int>(it - cumulative.begin());
}

RdsRepresentation RdsRepresentation::make_explicit(RandomMapDistribution maps,
                                                  TransitionKernel kernel) {
  const int n = kernel.size();
  if (maps.maps.size() != maps.probs.size() || maps.maps.empty()) {
    throw SpecError("BadMapFamily", "map family and probability list sizes differ or are empty");
  }
  double total = 0.0;
  for (double p : maps.probs) {
    if (!(p > 0.0)) throw SpecError("BadMapFamily", "map probabilities must be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw SpecError("BadMapFamily", "map probabilities sum to " + std::to_string(total));
  }
  for (const auto& f : maps.maps) {
    if (static_cast<int>(f.size()) != n) {
      throw SpecError("BadMapFamily", "each map must be total on the state space");
    }
    for (int y : f) {
      if (y < 0 || y >= n) throw SpecError("BadMapFamily", "map image out of range");
    }
  }
  // Marginal check: sum of probs of maps sending x to y must equal P(x, y).
  double worst = 0.0;
  int worst_x = 0, worst_y = 0;
  for (int x = 0; x < n; ++x) {
    std::vector<double> marginal(n, 0.0);
    for (size_t i = 0; i < maps.maps.size(); ++i) {
      marginal[maps.maps[i][x]] += maps.probs[i];
    }
    for (int y = 0; y < n; ++y) {
      const double dev = std::abs(marginal[y] - kernel.prob(x, y));
      if (dev > worst) {
        worst = dev;
        worst_x = x;
        worst_y = y;
      }
    }
  }
  if (worst > kMarginalTol) {
    throw MarginalMismatch("explicit RDS marginal mismatch at (" +
                           kernel.state_name(worst_x) + "," + kernel.state_name(worst_y) +
                           "): deviation " + std::to_string(worst));
  }
  RdsRepresentation rds(RdsKind::Explicit, std::move(maps), std::move(kernel));
  rds.map_cdf_ = cumulative_sums(rds.maps_.probs);
  return rds;
}

RdsRepresentation RdsRepresentation::make_independent(TransitionKernel kernel) {
  return RdsRepresentation(RdsKind::Independent, {}, std::move(kernel));
}

int RdsRepresentation::selected_map(const Scenario& scenario, int64_t time) const {
  return inverse_cdf_pick(draw_unit(scenario, time, kSlotMapSelect), map_cdf_);
}

int RdsRepresentation::independent_image(const Scenario& scenario, int64_t time,
                                         int state) const {
  const double u = draw_unit(scenario, time, slot_for_state(state));
  const auto& row = kernel_.row(state);
  double acc = 0.0;
  for (size_t i = 0; i + 1 < row.size(); ++i) {
    acc += row[i].prob;
    if (u < acc) return row[i].target;
  }
  return row.back().target;
}

int RdsRepresentation::step_point(const Scenario& scenario, int64_t time, int point) const {
  if (kind_ == RdsKind::Explicit) {
    return maps_.maps[selected_map(scenario, time)][point];
  }
  return independent_image(scenario, time, point);
}

std::vector<int> RdsRepresentation::step(const Scenario& scenario, int64_t time,
                                         const std::vector<int>& points) const {
  std::vector<int> out(points.size());
  if (kind_ == RdsKind::Explicit) {
    const auto& f = maps_.maps[selected_map(scenario, time)];
    for (size_t i = 0; i < points.size(); ++i) out[i] = f[points[i]];
  } else {
    for (size_t i = 0; i < points.size(); ++i) {
      out[i] = independent_image(scenario, time, points[i]);
    }
  }
  return out;
}

std::vector<int> RdsRepresentation::evolve(const Scenario& scenario, int64_t start_time,
                                           int64_t n, std::vector<int> points) const {
  for (int64_t i = 0; i < n; ++i) {
    points = step(scenario, start_time + i, points);
  }
  return points;
}

int RdsRepresentation::evolve_point(const Scenario& scenario, int64_t start_time,
                                    int64_t n, int point) const {
  for (int64_t i = 0; i < n; ++i) {
    point = step_point(scenario, start_time + i, point);
  }
  return point;
}

TransitionKernel RdsRepresentation::induced_kernel() const {
  if (kind_ == RdsKind::Independent) return kernel_;
  const int n = kernel_.size();
  ChainSpec spec;
  spec.states = kernel_.states();
  for (int x = 0; x < n; ++x) {
    std::map<int, double> marginal;
    for (size_t i = 0; i < maps_.maps.size(); ++i) {
      marginal[maps_.maps[i][x]] += maps_.probs[i];
    }
    for (const auto& [y, p] : marginal) {
      spec.transitions.push_back({spec.states[x], spec.states[y], p});
    }
  }
  return TransitionKernel::validate(spec);
}

}  // namespace rdsync
