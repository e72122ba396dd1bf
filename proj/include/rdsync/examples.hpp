#pragma once

#include "rdsync/rds.hpp"

namespace rdsync {

// Desk-scale chains and representations used by the bundled `example`
// subcommand and the test suites.

// Four states a, b, c, d; each with a half self-loop and a half clockwise
// step a -> b -> c -> d -> a.
TransitionKernel four_state_chain();

// The two-map family representing the four-state chain: f1 pushes a,b onto b
// and c,d onto d; f2 pushes b,c onto c and d,a onto a. Each with prob 1/2.
RdsRepresentation four_state_f1f2();
RdsRepresentation four_state_independent();

// Two states with all transition probabilities 1/2, represented by a map
// family that coalesces with probability epsilon per step.
RdsRepresentation epsilon_two_state(double epsilon);

// Deterministic 3-cycle a -> b -> c -> a.
TransitionKernel three_cycle_chain();

// Birth-death walk on {0..N}: up 1/4, down 3/4, truncated at N with the lost
// quarter redirected into a boundary self-loop.
TransitionKernel truncated_random_walk(int n_top);

// Renewal-type chain on {1..N} with heavy-tailed return law rho(n) ~ n^{-5/2}:
// from n jump to 1 with the hazard of rho, else advance to n + 1. Truncated
// at N with the advance mass redirected into a boundary self-loop.
TransitionKernel heavy_tail_chain(int n_top);

}  // namespace rdsync
