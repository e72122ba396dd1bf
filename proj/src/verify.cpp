#include "rdsync/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rdsync {

namespace {

CheckResult check_cocycle(const RdsRepresentation& rds, const Scenario& base,
                          const VerifyOptions& opt) {
  CheckResult r{"cocycle_law", true, ""};
  int64_t failures = 0;
  for (int s = 0; s < opt.cocycle_seeds; ++s) {
    const Scenario scenario = base.substream(1000 + s);
    for (int total = 0; total <= opt.cocycle_max_nm; ++total) {
      for (int m = 0; m <= total; ++m) {
        const int n = total - m;
        for (int x = 0; x < rds.n_states(); ++x) {
          const int direct = rds.evolve_point(scenario, 0, total, x);
          const int mid = rds.evolve_point(scenario, 0, m, x);
          const int composed = rds.evolve_point(scenario, m, n, mid);
          if (direct != composed) ++failures;
        }
      }
    }
  }
  if (failures > 0) {
    r.passed = false;
    r.detail = std::to_string(failures) + " cocycle violations";
  }
  return r;
}

CheckResult check_row_stochastic(const TransitionKernel& kernel) {
  CheckResult r{"row_stochasticity", true, ""};
  double worst = 0.0;
  for (int x = 0; x < kernel.size(); ++x) {
    double sum = 0.0;
    for (const auto& e : kernel.row(x)) sum += e.prob;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  std::ostringstream os;
  os << "max |row sum - 1| = " << worst;
  r.detail = os.str();
  r.passed = worst <= TransitionKernel::kRowSumTol;
  return r;
}

CheckResult check_stationary(const StationaryDistribution& pi,
                             const VerifyOptions& opt) {
  CheckResult r{"stationary_residual", true, ""};
  std::ostringstream os;
  os << "pi*P - pi residual = " << pi.residual;
  r.detail = os.str();
  r.passed = pi.residual < opt.pi_residual_tol &&
             std::abs(std::accumulate(pi.mass.begin(), pi.mass.end(), 0.0) - 1.0) <= 1e-12;
  return r;
}

CheckResult check_return_times(const TransitionKernel& kernel,
                               const StationaryDistribution& pi,
                               const VerifyOptions& opt) {
  CheckResult r{"return_time_identity", true, ""};
  double worst = 0.0;
  for (int y = 0; y < kernel.size(); ++y) {
    const auto m = hitting_time_moments(kernel, y);
    worst = std::max(worst, std::abs(m.first_moment[y] * pi.mass[y] - 1.0));
  }
  std::ostringstream os;
  os << "max |E_y[tau_y] pi(y) - 1| = " << worst;
  r.detail = os.str();
  r.passed = worst <= opt.return_time_tol;
  return r;
}

CheckResult check_insulation_invariance(const RdsRepresentation& rds,
                                        const InsulationStructure& structure,
                                        const Scenario& base, const VerifyOptions& opt) {
  CheckResult r{"insulation_invariance", true, ""};
  if (structure.witness.size() < 2) {
    r.detail = "no nontrivial insulated set";
    return r;
  }
  int64_t failures = 0;
  for (int s = 0; s < opt.insulation_seeds; ++s) {
    const Scenario scenario = base.substream(2000 + s);
    std::vector<int> set = structure.witness;
    for (int n = 0; n < opt.insulation_steps; ++n) {
      set = rds.step(scenario, n, set);
      std::vector<int> unique = set;
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      if (unique.size() != structure.witness.size() ||
          !structure.pairwise_insulated(unique)) {
        ++failures;
      }
    }
  }
  if (failures > 0) {
    r.passed = false;
    r.detail = std::to_string(failures) + " evolved sets lost insulation";
  }
  return r;
}

CheckResult check_delta_absorption(const TwoPointKernel& q,
                                   const InsulationStructure& structure) {
  CheckResult r{"delta_absorption", true, ""};
  int64_t leaks = 0;
  for (int pair : structure.delta_pairs) {
    for (const auto& e : q.row(pair)) {
      auto [x, y] = q.pair_of(e.target);
      if (!structure.in_delta(x, y)) ++leaks;
    }
  }
  if (leaks > 0) {
    r.passed = false;
    r.detail = std::to_string(leaks) + " positive transitions exit Delta";
  }
  return r;
}

CheckResult check_attractor_invariance(const RdsRepresentation& rds,
                                       const InsulationStructure& structure,
                                       const Scenario& base, const VerifyOptions& opt) {
  CheckResult r{"attractor_invariance", true, ""};
  int64_t failures = 0;
  for (int s = 0; s < opt.invariance_seeds; ++s) {
    const auto report = verify_invariance(rds, structure, base.substream(3000 + s),
                                          opt.invariance_steps);
    failures += report.n_failures;
  }
  if (failures > 0) {
    r.passed = false;
    r.detail = std::to_string(failures) + " invariance violations";
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification(const RdsRepresentation& rds,
                                          const Scenario& base,
                                          const VerifyOptions& options) {
  const TransitionKernel& kernel = rds.kernel();
  const auto pi = stationary_distribution(kernel);
  const auto q = TwoPointKernel::build(rds);
  const auto structure = insulation_relation(q);

  std::vector<CheckResult> results;
  results.push_back(check_cocycle(rds, base, options));
  results.push_back(check_row_stochastic(kernel));
  results.push_back(check_stationary(pi, options));
  results.push_back(check_return_times(kernel, pi, options));
  results.push_back(check_insulation_invariance(rds, structure, base, options));
  results.push_back(check_delta_absorption(q, structure));
  results.push_back(check_attractor_invariance(rds, structure, base, options));
  return results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace rdsync
