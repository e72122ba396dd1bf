#include "rdsync/two_point.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <string>

namespace rdsync {

TwoPointKernel TwoPointKernel::build(const RdsRepresentation& rds, int64_t pair_cap) {
  const int n = rds.n_states();
  const int64_t pairs = static_cast<int64_t>(n) * n;
  if (pairs > pair_cap) {
    throw StateSpaceTooLarge("two-point kernel needs " + std::to_string(pairs) +
                             " pairs, cap is " + std::to_string(pair_cap));
  }
  TwoPointKernel q;
  q.n_ = n;
  q.rows_.resize(pairs);
  const auto& kernel = rds.kernel();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      std::map<int, double> row;
      if (rds.kind() == RdsKind::Explicit) {
        const auto& family = rds.maps();
        for (size_t i = 0; i < family.maps.size(); ++i) {
          row[q.pair_index(family.maps[i][x], family.maps[i][y])] += family.probs[i];
        }
      } else if (x == y) {
        // Diagonal moves as the 1-point chain.
        for (const auto& e : kernel.row(x)) {
          row[q.pair_index(e.target, e.target)] += e.prob;
        }
      } else {
        for (const auto& ex : kernel.row(x)) {
          for (const auto& ey : kernel.row(y)) {
            row[q.pair_index(ex.target, ey.target)] += ex.prob * ey.prob;
          }
        }
      }
      auto& out = q.rows_[q.pair_index(x, y)];
      out.reserve(row.size());
      for (const auto& [target, prob] : row) out.push_back({target, prob});
    }
  }
  return q;
}

double TwoPointKernel::prob(int from_pair, int to_pair) const {
  for (const auto& e : rows_[from_pair]) {
    if (e.target == to_pair) return e.prob;
  }
  return 0.0;
}

InsulationStructure insulation_relation(const TwoPointKernel& q) {
  const int n = q.n_states();
  const int pairs = q.n_pairs();

  // Reverse reachability from the diagonal in the support digraph of Q.
  std::vector<std::vector<int>> reverse(pairs);
  for (int p = 0; p < pairs; ++p) {
    for (const auto& e : q.row(p)) reverse[e.target].push_back(p);
  }
  std::vector<bool> reaches_diagonal(pairs, false);
  std::queue<int> bfs;
  for (int x = 0; x < n; ++x) {
    const int d = q.pair_index(x, x);
    reaches_diagonal[d] = true;
    bfs.push(d);
  }
  while (!bfs.empty()) {
    int p = bfs.front();
    bfs.pop();
    for (int pred : reverse[p]) {
      if (!reaches_diagonal[pred]) {
        reaches_diagonal[pred] = true;
        bfs.push(pred);
      }
    }
  }

  InsulationStructure out;
  out.n_states = n;
  out.relation.assign(n, std::vector<bool>(n, false));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x != y && !reaches_diagonal[q.pair_index(x, y)]) out.relation[x][y] = true;
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (out.in_delta(x, y)) out.delta_pairs.push_back(q.pair_index(x, y));
    }
  }
  auto [kappa, witness] = maximum_insulated_set(out.relation);
  out.kappa_hat = kappa;
  out.witness = std::move(witness);
  return out;
}

bool InsulationStructure::pairwise_insulated(const std::vector<int>& points) const {
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (!relation[points[i]][points[j]]) return false;
    }
  }
  return true;
}

namespace {

// Branch and bound maximum clique. Candidates are kept in ascending state
// order and ties resolved by extending with the smallest state first, so the
// first clique of maximum size found is the lexicographically smallest one.
struct CliqueSearch {
  const std::vector<std::vector<bool>>& adj;
  std::vector<int> best;
  std::vector<int> current;

  void expand(const std::vector<int>& candidates) {
    if (current.size() + candidates.size() <= best.size()) return;  // bound
    if (candidates.empty()) {
      if (current.size() > best.size()) best = current;
      return;
    }
    // Pivot on the candidate with most candidate-neighbors; only branch on
    // candidates not adjacent to the pivot, plus the pivot itself.
    int pivot = candidates.front();
    size_t pivot_degree = 0;
    for (int v : candidates) {
      size_t d = 0;
      for (int w : candidates) {
        if (adj[v][w]) ++d;
      }
      if (d > pivot_degree) {
        pivot_degree = d;
        pivot = v;
      }
    }
    for (size_t i = 0; i < candidates.size(); ++i) {
      const int v = candidates[i];
      if (v != pivot && adj[pivot][v]) continue;
      current.push_back(v);
      std::vector<int> next;
      for (size_t j = i + 1; j < candidates.size(); ++j) {
        if (adj[v][candidates[j]]) next.push_back(candidates[j]);
      }
      expand(next);
      current.pop_back();
    }
  }
};

// Builds the lexicographically smallest clique of the given size by always
// extending with the smallest feasible state.
bool lex_clique(const std::vector<std::vector<bool>>& adj, size_t size,
                const std::vector<int>& candidates, std::vector<int>& clique) {
  if (clique.size() == size) return true;
  if (clique.size() + candidates.size() < size) return false;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const int v = candidates[i];
    clique.push_back(v);
    std::vector<int> next;
    for (size_t j = i + 1; j < candidates.size(); ++j) {
      if (adj[v][candidates[j]]) next.push_back(candidates[j]);
    }
    if (lex_clique(adj, size, next, clique)) return true;
    clique.pop_back();
  }
  return false;
}

}  // namespace

std::pair<int, std::vector<int>> maximum_insulated_set(
    const std::vector<std::vector<bool>>& relation, int max_states) {
  const int n = static_cast<int>(relation.size());
  if (n > max_states) {
    throw StateSpaceTooLarge("maximum-clique search capped at " +
                             std::to_string(max_states) + " states, got " +
                             std::to_string(n));
  }
  CliqueSearch search{relation, {}, {}};
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  search.expand(all);
  size_t kappa = std::max<size_t>(search.best.size(), n > 0 ? 1 : 0);
  std::vector<int> witness;
  lex_clique(relation, kappa, all, witness);
  return {static_cast<int>(kappa), witness};
}

namespace {

constexpr double kMassTol = 1e-9;

bool fill_blocks(const std::vector<double>& mass, double block_target,
                 std::vector<int>& assignment, std::vector<double>& block_sum,
                 size_t state) {
  if (state == mass.size()) {
    for (double s : block_sum) {
      if (std::abs(s - block_target) > kMassTol) return false;
    }
    return true;
  }
  size_t open_blocks = 0;
  for (size_t b = 0; b < block_sum.size(); ++b) {
    // Symmetry breaking: at most one still-empty block is tried.
    if (block_sum[b] == 0.0 && ++open_blocks > 1) break;
    if (block_sum[b] + mass[state] > block_target + kMassTol) continue;
    block_sum[b] += mass[state];
    assignment[state] = static_cast<int>(b);
    if (fill_blocks(mass, block_target, assignment, block_sum, state + 1)) return true;
    block_sum[b] -= mass[state];
    if (block_sum[b] == 0.0) block_sum[b] = 0.0;
  }
  return false;
}

}  // namespace

PartitionFeasibility kappa_partition_feasible(const StationaryDistribution& pi, int k) {
  PartitionFeasibility out;
  const int n = static_cast<int>(pi.mass.size());
  if (k < 1 || k > n) {
    out.status = PartitionFeasibility::Status::Infeasible;
    return out;
  }
  if (k == 1) {
    out.status = PartitionFeasibility::Status::Feasible;
    out.witness.emplace_back(n);
    std::iota(out.witness.back().begin(), out.witness.back().end(), 0);
    return out;
  }
  if (n > 24) {
    out.status = PartitionFeasibility::Status::Undecided;
    return out;
  }
  std::vector<int> assignment(n, -1);
  std::vector<double> block_sum(k, 0.0);
  if (fill_blocks(pi.mass, 1.0 / k, assignment, block_sum, 0)) {
    out.status = PartitionFeasibility::Status::Feasible;
    out.witness.assign(k, {});
    for (int i = 0; i < n; ++i) out.witness[assignment[i]].push_back(i);
  } else {
    out.status = PartitionFeasibility::Status::Infeasible;
  }
  return out;
}

int64_t default_sync_horizon(int n_states) {
  return 100LL * n_states * n_states;
}

SynchronizingClasses synchronizing_classes(const RdsRepresentation& rds,
                                           const InsulationStructure& structure,
                                           const StationaryDistribution& pi,
                                           const Scenario& scenario, int64_t horizon) {
  const int n = rds.n_states();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  std::vector<std::pair<int, int>> unresolved;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      int cx = x, cy = y;
      bool resolved = false;
      for (int64_t t = 0; t <= horizon; ++t) {
        if (cx == cy) {
          parent[find(x)] = find(y);
          resolved = true;
          break;
        }
        if (structure.insulated(cx, cy)) {
          resolved = true;  // never coalesce
          break;
        }
        auto next = rds.step(scenario, t, {cx, cy});
        cx = next[0];
        cy = next[1];
      }
      if (!resolved) unresolved.emplace_back(x, y);
    }
  }
  if (!unresolved.empty()) {
    throw HorizonExceeded(std::to_string(unresolved.size()) +
                          " pairs unresolved within horizon " + std::to_string(horizon));
  }

  // Key each class by its smallest member so the report order is canonical.
  std::map<int, std::vector<int>> grouped;
  for (int x = 0; x < n; ++x) grouped[find(x)].push_back(x);
  std::map<int, std::vector<int>> canonical;
  for (auto& [root, members] : grouped) canonical[members.front()] = std::move(members);
  SynchronizingClasses out;
  for (auto& [least, members] : canonical) {
    double mass = 0.0;
    for (int x : members) mass += pi.mass[x];
    out.classes.push_back(std::move(members));
    out.class_mass.push_back(mass);
  }
  return out;
}

}  // namespace rdsync
