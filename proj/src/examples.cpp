#include "rdsync/examples.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rdsync {

TransitionKernel four_state_chain() {
  ChainSpec spec;
  spec.states = {"a", "b", "c", "d"};
  const std::vector<std::string> next = {"b", "c", "d", "a"};
  for (size_t i = 0; i < spec.states.size(); ++i) {
    spec.transitions.push_back({spec.states[i], spec.states[i], 0.5});
    spec.transitions.push_back({spec.states[i], next[i], 0.5});
  }
  return TransitionKernel::validate(spec);
}

RdsRepresentation four_state_f1f2() {
  TransitionKernel kernel = four_state_chain();
  RandomMapDistribution family;
  // Indices: a=0, b=1, c=2, d=3.
  family.maps.push_back({1, 1, 3, 3});  // f1: a,b -> b and c,d -> d
  family.maps.push_back({0, 2, 2, 0});  // f2: b,c -> c and d,a -> a
  family.probs = {0.5, 0.5};
  return RdsRepresentation::make_explicit(std::move(family), std::move(kernel));
}

RdsRepresentation four_state_independent() {
  return RdsRepresentation::make_independent(four_state_chain());
}

RdsRepresentation epsilon_two_state(double epsilon) {
  if (!(epsilon > 0.0) || epsilon >= 1.0) {
    throw SpecError("BadParameter", "epsilon must lie in (0, 1)");
  }
  ChainSpec spec;
  spec.states = {"a", "b"};
  for (const auto& from : spec.states) {
    for (const auto& to : spec.states) {
      spec.transitions.push_back({from, to, 0.5});
    }
  }
  RandomMapDistribution family;
  family.maps.push_back({0, 1});  // identity
  family.maps.push_back({1, 0});  // swap
  family.maps.push_back({0, 0});  // collapse onto a
  family.maps.push_back({1, 1});  // collapse onto b
  family.probs = {(1.0 - epsilon) / 2.0, (1.0 - epsilon) / 2.0, epsilon / 2.0,
                  epsilon / 2.0};
  return RdsRepresentation::make_explicit(std::move(family),
                                          TransitionKernel::validate(spec));
}

TransitionKernel three_cycle_chain() {
  ChainSpec spec;
  spec.states = {"a", "b", "c"};
  spec.transitions = {{"a", "b", 1.0}, {"b", "c", 1.0}, {"c", "a", 1.0}};
  return TransitionKernel::validate(spec);
}

TransitionKernel truncated_random_walk(int n_top) {
  if (n_top < 1) throw SpecError("BadParameter", "truncation level must be >= 1");
  ChainSpec spec;
  for (int i = 0; i <= n_top; ++i) spec.states.push_back(std::to_string(i));
  spec.transitions.push_back({"0", "0", 0.75});
  spec.transitions.push_back({"0", "1", 0.25});
  for (int i = 1; i < n_top; ++i) {
    spec.transitions.push_back({spec.states[i], spec.states[i - 1], 0.75});
    spec.transitions.push_back({spec.states[i], spec.states[i + 1], 0.25});
  }
  // Boundary row: the upward quarter is redirected into a self-loop.
  spec.transitions.push_back({spec.states[n_top], spec.states[n_top - 1], 0.75});
  spec.transitions.push_back({spec.states[n_top], spec.states[n_top], 0.25});
  TransitionKernel kernel = TransitionKernel::validate(spec);
  kernel.set_truncation_mass(0.25);
  return kernel;
}

namespace {

// Tail sums T(n) = sum_{k >= n} k^{-5/2}, evaluated by downward summation
// with an integral remainder past the summation bound.
std::vector<double> heavy_tail_tails(int n_top) {
  const int bound = 1'000'000;
  double tail = (2.0 / 3.0) * std::pow(bound + 0.5, -1.5);
  std::vector<double> tails(n_top + 2, 0.0);
  for (int k = bound; k >= 1; --k) {
    tail += std::pow(static_cast<double>(k), -2.5);
    if (k <= n_top + 1) tails[k] = tail;
  }
  return tails;
}

}  // namespace

TransitionKernel heavy_tail_chain(int n_top) {
  if (n_top < 2) throw SpecError("BadParameter", "truncation level must be >= 2");
  const auto tails = heavy_tail_tails(n_top);
  ChainSpec spec;
  for (int i = 1; i <= n_top; ++i) spec.states.push_back(std::to_string(i));
  double redirected = 0.0;
  for (int n = 1; n <= n_top; ++n) {
    // Hazard of the return law: p_n = rho(n) / sum_{k >= n} rho(k).
    const double p_n = std::pow(static_cast<double>(n), -2.5) / tails[n];
    const std::string& from = spec.states[n - 1];
    if (n < n_top) {
      spec.transitions.push_back({from, "1", p_n});
      spec.transitions.push_back({from, spec.states[n], 1.0 - p_n});
    } else {
      // Boundary row: the advance mass stays put.
      spec.transitions.push_back({from, "1", p_n});
      spec.transitions.push_back({from, from, 1.0 - p_n});
      redirected = 1.0 - p_n;
    }
  }
  TransitionKernel kernel = TransitionKernel::validate(spec);
  kernel.set_truncation_mass(redirected);
  return kernel;
}

}  // namespace rdsync
