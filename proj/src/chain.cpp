#include "rdsync/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

namespace rdsync {

TransitionKernel TransitionKernel::validate(const ChainSpec& spec) {
  TransitionKernel k;
  std::unordered_map<std::string, int> index;
  for (const auto& label : spec.states) {
    if (index.count(label)) {
      throw SpecError("DuplicateState", "duplicate state label '" + label + "'");
    }
    index[label] = static_cast<int>(k.states_.size());
    k.states_.push_back(label);
  }
  if (k.states_.empty()) throw SpecError("EmptyChain", "chain has no states");

  k.rows_.assign(k.states_.size(), {});
  std::set<std::pair<int, int>> seen;
  for (const auto& e : spec.transitions) {
    auto from = index.find(e.from);
    auto to = index.find(e.to);
    if (from == index.end()) throw UnknownState("unknown state '" + e.from + "'");
    if (to == index.end()) throw UnknownState("unknown state '" + e.to + "'");
    if (!(e.prob > 0.0) || e.prob > 1.0) {
      throw SpecError("BadProbability",
                      "transition " + e.from + "->" + e.to + " has probability outside (0,1]");
    }
    if (!seen.insert({from->second, to->second}).second) {
      throw DuplicateEdge("duplicate transition " + e.from + "->" + e.to);
    }
    k.rows_[from->second].push_back({to->second, e.prob});
  }
  for (int i = 0; i < k.size(); ++i) {
    double sum = 0.0;
    for (const auto& entry : k.rows_[i]) sum += entry.prob;
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw RowSumError("row for state '" + k.states_[i] + "' sums to " +
                        std::to_string(sum) + ", not 1");
    }
    std::sort(k.rows_[i].begin(), k.rows_[i].end(),
              [](const Entry& a, const Entry& b) { return a.target < b.target; });
  }
  return k;
}

int TransitionKernel::state_index(const std::string& label) const {
  for (int i = 0; i < size(); ++i) {
    if (states_[i] == label) return i;
  }
  throw UnknownState("unknown state '" + label + "'");
}

double TransitionKernel::prob(int from, int to) const {
  for (const auto& e : rows_[from]) {
    if (e.target == to) return e.prob;
  }
  return 0.0;
}

int TransitionKernel::edge_count() const {
  int n = 0;
  for (const auto& r : rows_) n += static_cast<int>(r.size());
  return n;
}

namespace {

// Iterative Tarjan SCC over the positive-transition digraph.
std::vector<int> scc_components(const TransitionKernel& k, int& n_components) {
  const int n = k.size();
  std::vector<int> comp(n, -1), low(n), num(n, -1), stack_of;
  std::vector<bool> on_stack(n, false);
  int counter = 0;
  n_components = 0;

  struct Frame {
    int v;
    size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({root, 0});
    num[root] = low[root] = counter++;
    stack_of.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < k.row(f.v).size()) {
        int w = k.row(f.v)[f.edge++].target;
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack_of.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          while (true) {
            int w = stack_of.back();
            stack_of.pop_back();
            on_stack[w] = false;
            comp[w] = n_components;
            if (w == f.v) break;
          }
          ++n_components;
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

ClassDecomposition irreducibility_classes(const TransitionKernel& kernel) {
  int n_comp = 0;
  std::vector<int> comp = scc_components(kernel, n_comp);
  std::vector<bool> closed(n_comp, true);
  for (int v = 0; v < kernel.size(); ++v) {
    for (const auto& e : kernel.row(v)) {
      if (comp[e.target] != comp[v]) closed[comp[v]] = false;
    }
  }
  ClassDecomposition out;
  std::vector<std::vector<int>> members(n_comp);
  for (int v = 0; v < kernel.size(); ++v) members[comp[v]].push_back(v);
  for (int c = 0; c < n_comp; ++c) {
    if (closed[c]) {
      out.irreducibility_classes.push_back(members[c]);
    } else {
      for (int v : members[c]) out.transient_states.push_back(v);
    }
  }
  std::sort(out.transient_states.begin(), out.transient_states.end());
  std::sort(out.irreducibility_classes.begin(), out.irreducibility_classes.end());
  return out;
}

void require_irreducible(const TransitionKernel& kernel) {
  auto dec = irreducibility_classes(kernel);
  if (dec.irreducibility_classes.size() != 1 || !dec.transient_states.empty()) {
    throw NotIrreducible("chain is not irreducible: " +
                         std::to_string(dec.irreducibility_classes.size()) +
                         " classes, " + std::to_string(dec.transient_states.size()) +
                         " transient states");
  }
}

StationaryDistribution stationary_distribution(const TransitionKernel& kernel) {
  require_irreducible(kernel);
  const int n = kernel.size();
  // Solve pi (P - I) = 0 with the last balance column replaced by sum = 1,
  // i.e. A^T pi = e_last with A = (P - I | 1).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (const auto& e : kernel.row(x)) a(x, e.target) += e.prob;
    a(x, x) -= 1.0;
  }
  for (int x = 0; x < n; ++x) a(x, n - 1) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a.transpose());
  if (!lu.isInvertible()) throw SingularSystem("stationary solve is singular");
  Eigen::VectorXd pi = lu.solve(rhs);

  StationaryDistribution out;
  out.mass.assign(pi.data(), pi.data() + n);
  double residual = 0.0;
  for (int y = 0; y < n; ++y) {
    double flow = -pi(y);
    for (int x = 0; x < n; ++x) flow += pi(x) * kernel.prob(x, y);
    residual = std::max(residual, std::abs(flow));
  }
  out.residual = residual;
  return out;
}

PeriodInfo period(const TransitionKernel& kernel) {
  require_irreducible(kernel);
  const int n = kernel.size();
  std::vector<int> level(n, -1);
  std::queue<int> bfs;
  level[0] = 0;
  bfs.push(0);
  long long g = 0;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (const auto& e : kernel.row(v)) {
      if (level[e.target] == -1) {
        level[e.target] = level[v] + 1;
        bfs.push(e.target);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    for (const auto& e : kernel.row(v)) {
      g = std::gcd(g, static_cast<long long>(level[v]) + 1 - level[e.target]);
    }
  }
  PeriodInfo out;
  out.period = static_cast<int>(g == 0 ? 1 : g);
  out.classes.assign(out.period, {});
  for (int v = 0; v < n; ++v) {
    out.classes[((level[v] % out.period) + out.period) % out.period].push_back(v);
  }
  return out;
}

HittingMoments hitting_time_moments(const TransitionKernel& kernel, int target) {
  require_irreducible(kernel);
  const int n = kernel.size();
  // h(x) = 1 + sum_{z != target} P(x,z) h(z), for x != target.
  // The target row is excluded; its return moment is obtained afterwards by
  // conditioning on the first step.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
  for (int x = 0; x < n; ++x) {
    if (x == target) continue;
    for (const auto& e : kernel.row(x)) {
      if (e.target != target) a(x, e.target) -= e.prob;
    }
  }
  // Row `target` is left as identity and resolved by first-step conditioning below.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw SingularSystem("hitting-time solve is singular");
  Eigen::VectorXd h = lu.solve(one);  // h(target) = 1 placeholder, unused

  // Second moments: s(x) = 1 + 2 sum_{z != y} P(x,z) h(z) + sum_{z != y} P(x,z) s(z).
  Eigen::VectorXd rhs2 = Eigen::VectorXd::Ones(n);
  for (int x = 0; x < n; ++x) {
    if (x == target) continue;
    for (const auto& e : kernel.row(x)) {
      if (e.target != target) rhs2(x) += 2.0 * e.prob * h(e.target);
    }
  }
  Eigen::VectorXd s = lu.solve(rhs2);

  HittingMoments out;
  out.target = target;
  out.first_moment.assign(h.data(), h.data() + n);
  out.second_moment.assign(s.data(), s.data() + n);

  // Return moments at the target itself, conditioning on the first step.
  double ret1 = 1.0, ret2 = 1.0;
  for (const auto& e : kernel.row(target)) {
    if (e.target != target) {
      ret1 += e.prob * h(e.target);
      ret2 += e.prob * (2.0 * h(e.target) + s(e.target));
    }
  }
  out.first_moment[target] = ret1;
  out.second_moment[target] = ret2;
  return out;
}

Degree2Report is_ergodic_degree_2(const TransitionKernel& kernel) {
  const auto pi = stationary_distribution(kernel);
  const int n = kernel.size();
  Degree2Report out;
  out.expected_pi_tau.resize(n);
  out.flag = true;
  for (int y = 0; y < n; ++y) {
    auto m = hitting_time_moments(kernel, y);
    double e_pi = 0.0;
    for (int x = 0; x < n; ++x) {
      e_pi += pi.mass[x] * (x == y ? 0.0 : m.first_moment[x]);
    }
    // E_pi[tau_y] conditions on X_0 ~ pi and counts the first step, so the
    // x == y contribution is pi(y) * E_y[tau_y] with tau_y the return time.
    e_pi += pi.mass[y] * m.first_moment[y];
    out.expected_pi_tau[y] = e_pi;
    const double identity = 0.5 * pi.mass[y] * (m.second_moment[y] + m.first_moment[y]);
    const double rel = std::abs(e_pi - identity) / std::max(1.0, std::abs(identity));
    out.worst_identity_error = std::max(out.worst_identity_error, rel);
    if (!std::isfinite(e_pi) || rel > 1e-8) out.flag = false;
  }
  return out;
}

}  // namespace rdsync
