#pragma once

#include <string>
#include <vector>

#include "rdsync/attractor.hpp"

namespace rdsync {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int cocycle_seeds = 100;
  int cocycle_max_nm = 20;     // all splits with n + m <= this
  int invariance_seeds = 100;
  int invariance_steps = 50;
  int insulation_seeds = 50;
  int insulation_steps = 20;
  double pi_residual_tol = 1e-10;
  double return_time_tol = 1e-9;
};

// Full invariant suite on a representation: cocycle law, row stochasticity,
// stationary residual, return-time identity, insulation invariance, Delta
// absorption, attractor invariance. All checks are deterministic in `base`.
std::vector<CheckResult> run_verification(const RdsRepresentation& rds,
                                          const Scenario& base,
                                          const VerifyOptions& options = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace rdsync
