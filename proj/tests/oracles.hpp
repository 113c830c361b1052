#pragma once

// Slow reference implementations that share no code with the library.

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "hiersage/graph.hpp"
#include "hiersage/rng.hpp"

namespace oracle {

using hiersage::Graph;
using hiersage::NodeId;

inline std::vector<std::vector<bool>> adjacency(const Graph& g) {
  const auto n = g.num_nodes();
  std::vector<std::vector<bool>> a(n, std::vector<bool>(n, false));
  for (auto [u, v] : g.edges()) a[u][v] = a[v][u] = true;
  return a;
}

/// Betweenness by enumerating every simple s-t path for each unordered pair
/// and counting the shortest ones through each interior node.
inline std::vector<double> betweenness(const Graph& g) {
  const auto n = g.num_nodes();
  const auto a = adjacency(g);
  std::vector<double> b(n, 0.0);
  for (NodeId s = 0; s < n; ++s)
    for (NodeId t = s + 1; t < n; ++t) {
      std::size_t best = std::numeric_limits<std::size_t>::max();
      std::vector<std::vector<NodeId>> shortest;
      std::vector<NodeId> path{s};
      std::vector<bool> on(n, false);
      on[s] = true;
      std::function<void(NodeId)> dfs = [&](NodeId u) {
        if (path.size() - 1 > best) return;
        if (u == t) {
          if (path.size() - 1 < best) {
            best = path.size() - 1;
            shortest.clear();
          }
          shortest.push_back(path);
          return;
        }
        for (NodeId v = 0; v < n; ++v) {
          if (!a[u][v] || on[v]) continue;
          on[v] = true;
          path.push_back(v);
          dfs(v);
          path.pop_back();
          on[v] = false;
        }
      };
      dfs(s);
      if (shortest.empty()) continue;
      for (const auto& p : shortest)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) b[p[i]] += 1.0 / static_cast<double>(shortest.size());
    }
  return b;
}

/// Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j), straight from the
/// pairwise definition.
inline double modularity(const Graph& g, const std::vector<int>& comm) {
  const auto n = g.num_nodes();
  const double m2 = 2.0 * static_cast<double>(g.num_edges());
  const auto a = adjacency(g);
  double q = 0.0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (comm[i] == comm[j])
        q += (a[i][j] ? 1.0 : 0.0) - static_cast<double>(g.degree(i)) * static_cast<double>(g.degree(j)) / m2;
  return q / m2;
}

/// Best modularity over every set partition (restricted growth strings).
inline std::pair<double, std::vector<int>> max_modularity(const Graph& g) {
  const auto n = g.num_nodes();
  std::vector<int> rgs(n, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
    if (i == n) {
      const double q = modularity(g, rgs);
      if (q > best + 1e-15) {
        best = q;
        arg = rgs;
      }
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  if (n > 0) {
    rgs[0] = 0;
    rec(1, 0);
  }
  return {best, arg};
}

/// Erdős–Rényi graph resampled until connected.
inline Graph random_connected_graph(std::size_t n, double p, hiersage::Rng& rng) {
  for (;;) {
    std::vector<hiersage::Edge> edges;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (hiersage::uniform01(rng) < p) edges.emplace_back(u, v);
    auto g = Graph::from_edges(n, edges);
    if (hiersage::is_connected(g)) return g;
  }
}

inline Graph from_pairs(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs) {
  std::vector<hiersage::Edge> e;
  for (auto [u, v] : pairs) e.emplace_back(u, v);
  return Graph::from_edges(n, e);
}

inline Graph clique(std::size_t n, NodeId offset = 0, std::vector<hiersage::Edge>* into = nullptr) {
  std::vector<hiersage::Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.emplace_back(offset + u, offset + v);
  if (into) into->insert(into->end(), e.begin(), e.end());
  return Graph::from_edges(offset + n, e);
}

}  // namespace oracle
