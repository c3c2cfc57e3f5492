#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace nashfund {

/// Dinic max-flow on real capacities. Residuals at or below `eps` count as
/// saturated, which keeps the search finite under rounding.
class FlowNetwork {
 public:
  static constexpr double infinite = std::numeric_limits<double>::infinity();

  explicit FlowNetwork(std::size_t nodes, double eps = 0.0)
      : adjacency_(nodes), level_(nodes), next_edge_(nodes), eps_(eps) {}

  /// Returns an id usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, double capacity) {
    const std::size_t id = edges_.size();
    edges_.push_back({to, capacity, 0.0});
    adjacency_[from].push_back(id);
    edges_.push_back({from, 0.0, 0.0});
    adjacency_[to].push_back(id + 1);
    return id;
  }

  double max_flow(std::size_t source, std::size_t sink) {
    double total = 0.0;
    while (build_levels(source, sink)) {
      std::fill(next_edge_.begin(), next_edge_.end(), 0);
      while (true) {
        const double pushed = augment(source, sink, infinite);
        if (pushed <= eps_) break;
        total += pushed;
      }
    }
    return total;
  }

  double flow(std::size_t edge) const { return edges_[edge].flow; }

  /// Nodes reachable from `source` in the residual graph: the source side of
  /// a minimum cut once max_flow() has run.
  std::vector<bool> reachable_from(std::size_t source) const {
    std::vector<bool> seen(adjacency_.size(), false);
    std::queue<std::size_t> frontier;
    seen[source] = true;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t id : adjacency_[v]) {
        const Edge& e = edges_[id];
        if (!seen[e.to] && residual(e) > eps_) {
          seen[e.to] = true;
          frontier.push(e.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Edge {
    std::size_t to;
    double capacity;
    double flow;
  };

  static double residual(const Edge& e) { return e.capacity - e.flow; }

  bool build_levels(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t id : adjacency_[v]) {
        const Edge& e = edges_[id];
        if (level_[e.to] < 0 && residual(e) > eps_) {
          level_[e.to] = level_[v] + 1;
          frontier.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double augment(std::size_t v, std::size_t sink, double limit) {
    if (v == sink) return limit;
    for (std::size_t& k = next_edge_[v]; k < adjacency_[v].size(); ++k) {
      const std::size_t id = adjacency_[v][k];
      Edge& e = edges_[id];
      if (level_[e.to] != level_[v] + 1 || residual(e) <= eps_) continue;
      const double pushed = augment(e.to, sink, std::min(limit, residual(e)));
      if (pushed > eps_) {
        e.flow += pushed;
        edges_[id ^ 1].flow -= pushed;
        return pushed;
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> next_edge_;
  double eps_;
};

}  // namespace nashfund
