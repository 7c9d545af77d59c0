#include "lcs/theory/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "lcs/error.hpp"

namespace lcs::theory {

FlowNetwork::FlowNetwork(std::size_t nodes) : adj_(nodes) {}

std::size_t FlowNetwork::add_edge(std::size_t from, std::size_t to, double capacity, double cost) {
  if (from >= adj_.size() || to >= adj_.size()) throw InvalidArgument("flow edge endpoint out of range");
  if (!(capacity >= 0.0)) throw InvalidArgument("flow capacities must be nonnegative");
  adj_[from].push_back({to, adj_[to].size() + (from == to ? 1 : 0), capacity, cost});
  adj_[to].push_back({from, adj_[from].size() - 1, 0.0, -cost});
  edges_.emplace_back(from, adj_[from].size() - 1);
  original_cap_.push_back(capacity);
  return edges_.size() - 1;
}

double FlowNetwork::flow(std::size_t edge) const {
  const auto [u, i] = edges_.at(edge);
  return original_cap_[edge] - adj_[u][i].cap;
}

bool FlowNetwork::bfs_levels(std::size_t s, std::size_t t) {
  level_.assign(adj_.size(), -1);
  std::queue<std::size_t> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (const Arc& a : adj_[u]) {
      if (a.cap > kEps && level_[a.to] < 0) {
        level_[a.to] = level_[u] + 1;
        q.push(a.to);
      }
    }
  }
  return level_[t] >= 0;
}

double FlowNetwork::push(std::size_t u, std::size_t t, double f) {
  if (u == t) return f;
  for (std::size_t& i = iter_[u]; i < adj_[u].size(); ++i) {
    Arc& a = adj_[u][i];
    if (a.cap > kEps && level_[a.to] == level_[u] + 1) {
      const double d = push(a.to, t, std::min(f, a.cap));
      if (d > 0.0) {
        a.cap -= d;
        adj_[a.to][a.rev].cap += d;
        return d;
      }
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(std::size_t s, std::size_t t) {
  double total = 0.0;
  while (bfs_levels(s, t)) {
    iter_.assign(adj_.size(), 0);
    while (true) {
      const double f = push(s, t, std::numeric_limits<double>::infinity());
      if (f <= 0.0) break;
      total += f;
    }
  }
  return total;
}

double FlowNetwork::min_cost_flow(std::size_t s, std::size_t t, double demand, double& cost) {
  const std::size_t n = adj_.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  double sent = 0.0;
  cost = 0.0;
  std::vector<double> dist(n);
  std::vector<std::size_t> prev_node(n), prev_arc(n);
  std::vector<char> in_queue(n);
  while (demand - sent > kEps) {
    // Bellman-Ford (queue based): residual arcs may carry negative cost.
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(in_queue.begin(), in_queue.end(), 0);
    dist[s] = 0.0;
    std::queue<std::size_t> q;
    q.push(s);
    in_queue[s] = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      in_queue[u] = 0;
      for (std::size_t i = 0; i < adj_[u].size(); ++i) {
        const Arc& a = adj_[u][i];
        // The 1e-12 slack stops cycling on round-off sized improvements.
        if (a.cap <= kEps) continue;
        const double cand = dist[u] + a.cost;
        if (dist[a.to] == kInf || cand < dist[a.to] - 1e-12 * (1.0 + std::abs(dist[a.to]))) {
          dist[a.to] = cand;
          prev_node[a.to] = u;
          prev_arc[a.to] = i;
          if (!in_queue[a.to]) {
            q.push(a.to);
            in_queue[a.to] = 1;
          }
        }
      }
    }
    if (dist[t] == kInf) break;
    double f = demand - sent;
    for (std::size_t v = t; v != s; v = prev_node[v]) f = std::min(f, adj_[prev_node[v]][prev_arc[v]].cap);
    for (std::size_t v = t; v != s; v = prev_node[v]) {
      Arc& a = adj_[prev_node[v]][prev_arc[v]];
      a.cap -= f;
      adj_[a.to][a.rev].cap += f;
    }
    sent += f;
    cost += f * dist[t];
  }
  return sent;
}

}  // namespace lcs::theory
