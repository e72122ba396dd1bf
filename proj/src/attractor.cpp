#include "rdsync/attractor.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>
#include <string>
#include <thread>

namespace rdsync {

namespace {

std::vector<int> sorted_unique(const std::vector<int>& comp) {
  std::set<int> image(comp.begin(), comp.end());
  return {image.begin(), image.end()};
}

}  // namespace

PullbackResult pullback_attractor(const RdsRepresentation& rds,
                                  const InsulationStructure& structure,
                                  const Scenario& scenario, int64_t max_back) {
  const int n = rds.n_states();
  // comp[x] = image of x under the composition over times -depth .. -1.
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::vector<int> image = sorted_unique(comp);

  for (int64_t depth = 1; depth <= max_back; ++depth) {
    // Prepend the time -depth map: comp'(x) = comp(phi_{-depth}(x)).
    std::vector<int> points(n);
    std::iota(points.begin(), points.end(), 0);
    const std::vector<int> first = rds.step(scenario, -depth, points);
    std::vector<int> next(n);
    for (int x = 0; x < n; ++x) next[x] = comp[first[x]];
    comp = std::move(next);

    std::vector<int> new_image = sorted_unique(comp);
    if (!std::includes(image.begin(), image.end(), new_image.begin(), new_image.end())) {
      throw CheckError("NestingViolated", "pullback images are not nested");
    }
    image = std::move(new_image);
    if (structure.pairwise_insulated(image)) {
      return {image, depth};
    }
  }
  throw NoConvergence("pullback did not stabilize within " + std::to_string(max_back) +
                      " backward steps; last cardinality " + std::to_string(image.size()));
}

AttractorReport estimate_kappa(const RdsRepresentation& rds,
                               const InsulationStructure& structure,
                               const Scenario& base, int64_t n_scenarios,
                               int64_t max_back, int threads) {
  const int n = rds.n_states();
  threads = std::max(1, threads);

  std::vector<std::map<int, int64_t>> histograms(threads);
  std::vector<std::vector<int64_t>> counts(threads, std::vector<int64_t>(n, 0));
  std::atomic<int64_t> next_index{0};

  auto worker = [&](int tid) {
    for (;;) {
      const int64_t i = next_index.fetch_add(1);
      if (i >= n_scenarios) break;
      const auto result = pullback_attractor(rds, structure, base.substream(i), max_back);
      histograms[tid][static_cast<int>(result.attractor.size())]++;
      for (int x : result.attractor) counts[tid][x]++;
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }

  AttractorReport report;
  report.n_scenarios = n_scenarios;
  for (const auto& h : histograms) {
    for (const auto& [card, count] : h) report.cardinality_histogram[card] += count;
  }
  report.membership.assign(n, 0.0);
  for (const auto& c : counts) {
    for (int x = 0; x < n; ++x) report.membership[x] += static_cast<double>(c[x]);
  }
  for (double& m : report.membership) m /= static_cast<double>(n_scenarios);

  int64_t modal_count = 0;
  for (const auto& [card, count] : report.cardinality_histogram) {
    if (count > modal_count) {
      modal_count = count;
      report.kappa = card;
    }
  }
  report.mixed_cardinality = report.cardinality_histogram.size() > 1;
  if (report.mixed_cardinality) {
    throw MixedCardinality("attractor cardinality varies across scenarios (" +
                           std::to_string(report.cardinality_histogram.size()) +
                           " distinct values); constant-cardinality invariant violated");
  }
  return report;
}

InvarianceReport verify_invariance(const RdsRepresentation& rds,
                                   const InsulationStructure& structure,
                                   const Scenario& scenario, int64_t n_checks,
                                   int64_t max_back) {
  InvarianceReport report;
  auto attractor_at = [&](int64_t k) {
    return pullback_attractor(rds, structure, shift(scenario, k), max_back).attractor;
  };
  std::vector<int> current = attractor_at(0);
  for (int64_t k = 0; k < n_checks; ++k) {
    std::vector<int> stepped = rds.step(scenario, k, current);
    std::sort(stepped.begin(), stepped.end());
    stepped.erase(std::unique(stepped.begin(), stepped.end()), stepped.end());
    const std::vector<int> next = attractor_at(k + 1);
    ++report.n_checks;
    if (stepped != next) ++report.n_failures;
    current = next;
  }
  return report;
}

int cftp_sample(const RdsRepresentation& rds, const InsulationStructure& structure,
                const Scenario& scenario, int64_t max_back) {
  if (structure.kappa_hat != 1) {
    throw NotSynchronizing("CFTP requires a synchronizing representation (kappa = 1), "
                           "got kappa = " + std::to_string(structure.kappa_hat));
  }
  const int n = rds.n_states();
  for (int64_t horizon = 1;; horizon *= 2) {
    if (horizon > max_back) {
      throw HorizonOverflow("CFTP horizon exceeded " + std::to_string(max_back));
    }
    // Compose the same noise over times -horizon .. -1; doubling reuses the
    // draws of every shorter window.
    std::vector<int> points(n);
    std::iota(points.begin(), points.end(), 0);
    for (int64_t t = -horizon; t < 0; ++t) {
      points = rds.step(scenario, t, points);
    }
    const bool singleton =
        std::all_of(points.begin(), points.end(), [&](int p) { return p == points[0]; });
    if (singleton) return points[0];
  }
}

}  // namespace rdsync
