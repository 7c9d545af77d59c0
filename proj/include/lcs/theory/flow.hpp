#pragma once

#include <cstddef>
#include <vector>

namespace lcs::theory {

// Directed network with real capacities. Used for the transport feasibility
// problems (max-flow, Dinic) and exact W_q (min-cost flow, successive
// shortest paths with Bellman-Ford).
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes);

  // Returns an edge id usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, double capacity, double cost = 0.0);

  double max_flow(std::size_t source, std::size_t sink);
  // Sends up to `demand` units at minimum total cost; returns the flow sent and
  // writes the total cost.
  double min_cost_flow(std::size_t source, std::size_t sink, double demand, double& cost);

  double flow(std::size_t edge) const;
  std::size_t nodes() const noexcept { return adj_.size(); }

  // Capacities below this are treated as saturated.
  static constexpr double kEps = 1e-14;

 private:
  struct Arc {
    std::size_t to;
    std::size_t rev;  // index of the reverse arc in adj_[to]
    double cap;
    double cost;
  };
  bool bfs_levels(std::size_t s, std::size_t t);
  double push(std::size_t u, std::size_t t, double f);

  std::vector<std::vector<Arc>> adj_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;  // (node, arc index)
  std::vector<double> original_cap_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace lcs::theory
