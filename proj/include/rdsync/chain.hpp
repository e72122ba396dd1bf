#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rdsync/errors.hpp"

namespace rdsync {

// Raw, unchecked chain description as it appears in a spec file.
struct ChainSpec {
  struct Edge {
    std::string from;
    std::string to;
    double prob = 0.0;
  };
  std::vector<std::string> states;
  std::vector<Edge> transitions;
};

// Validated sparse row-stochastic kernel. Zero entries are omitted and all
// stored probabilities are strictly positive.
class TransitionKernel {
 public:
  struct Entry {
    int target;
    double prob;
  };

  static constexpr double kRowSumTol = 1e-12;

  // Validates a raw spec: known states, no duplicate edges, rows summing to 1.
  static TransitionKernel validate(const ChainSpec& spec);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int i) const { return states_[i]; }
  int state_index(const std::string& label) const;
  const std::vector<Entry>& row(int i) const { return rows_[i]; }
  double prob(int from, int to) const;
  int edge_count() const;

  // Mass that a truncated-chain builder redirected into a boundary self-loop;
  // zero for ordinary chains.
  double truncation_mass() const { return truncation_mass_; }
  void set_truncation_mass(double m) { truncation_mass_ = m; }

 private:
  std::vector<std::string> states_;
  std::vector<std::vector<Entry>> rows_;
  double truncation_mass_ = 0.0;
};

struct StationaryDistribution {
  std::vector<double> mass;     // per state
  double residual = 0.0;        // max row residual of pi*P - pi
};

struct PeriodInfo {
  int period = 1;
  // classes[i] lists state indices of the i-th periodic class W_i; every
  // positive transition maps W_i into W_{(i+1) mod p}.
  std::vector<std::vector<int>> classes;
};

struct ClassDecomposition {
  std::vector<std::vector<int>> irreducibility_classes;  // closed SCCs
  std::vector<int> transient_states;
};

struct HittingMoments {
  int target = 0;
  std::vector<double> first_moment;   // E_x[tau_target]
  std::vector<double> second_moment;  // E_x[tau_target^2]
};

struct Degree2Report {
  bool flag = false;                      // all moments finite, identity holds
  std::vector<double> expected_pi_tau;    // E_pi[tau_y] per target y
  double worst_identity_error = 0.0;      // relative, against the return-moment identity
};

// Unique pi with pi*P = pi, by direct linear solve (one balance equation is
// replaced by the normalization constraint). Works on periodic chains.
StationaryDistribution stationary_distribution(const TransitionKernel& kernel);

// Period and periodic classes of an irreducible kernel, via BFS level gcd.
PeriodInfo period(const TransitionKernel& kernel);

// SCC decomposition of the positive-transition digraph; closed SCCs are the
// irreducibility classes, everything else is transient.
ClassDecomposition irreducibility_classes(const TransitionKernel& kernel);

// First and second moments of the hitting time of `target` from every state.
// At x == target the value is the return-time moment (first return, n >= 1).
HittingMoments hitting_time_moments(const TransitionKernel& kernel, int target);

// E_pi[tau_y] for every target, cross-checked against the return-moment
// identity E_pi[tau_y] = pi(y) (E_y[tau_y^2] + E_y[tau_y]) / 2.
Degree2Report is_ergodic_degree_2(const TransitionKernel& kernel);

void require_irreducible(const TransitionKernel& kernel);

}  // namespace rdsync
