#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

#include "hiersage/graph.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

inline std::vector<double> degree_vector(const Graph& g) {
  std::vector<double> d(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) d[u] = static_cast<double>(g.degree(u));
  return d;
}

/// Mean degree balance over a node's neighbours:
/// a(u) = 1/d(u) * sum_v min(d(u),d(v)) / max(d(u),d(v)); 0 for isolated nodes.
inline std::vector<double> assortativity(const Graph& g) {
  std::vector<double> a(g.num_nodes(), 0.0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto du = static_cast<double>(g.degree(u));
    if (du == 0) continue;
    // Extended precision keeps sums like k * (1/k) from drifting an ulp.
    long double sum = 0.0L;
    for (NodeId v : g.neighbors(u)) {
      const auto dv = static_cast<long double>(g.degree(v));
      sum += std::min<long double>(du, dv) / std::max<long double>(du, dv);
    }
    a[u] = static_cast<double>(sum / du);
  }
  return a;
}

struct BetweennessOptions {
  /// Divide by (n-1)(n-2)/2, the number of unordered pairs excluding v.
  bool normalized = false;
  /// 0 = exact. Otherwise Brandes from this many random pivot sources,
  /// scaled by n / pivots.
  std::size_t pivots = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

namespace detail {

// Accumulates one source's dependencies into `acc` (ordered-pair counting).
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), delta(n), order(n), queue(n) {}

  void run(const Graph& g, NodeId s, std::vector<double>& acc) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::size_t head = 0, tail = 0, visited = 0;
    sigma[s] = 1.0;
    dist[s] = 0;
    queue[tail++] = s;
    while (head < tail) {
      NodeId v = queue[head++];
      order[visited++] = v;
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue[tail++] = w;
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Reverse BFS order; predecessors are neighbours one level closer.
    for (std::size_t i = visited; i-- > 0;) {
      NodeId w = order[i];
      for (NodeId v : g.neighbors(w))
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) acc[w] += delta[w];
    }
  }

  std::vector<double> sigma;
  std::vector<int> dist;
  std::vector<double> delta;
  std::vector<NodeId> order;
  std::vector<NodeId> queue;
};

}  // namespace detail

/// Betweenness over unordered pairs {u, w} with u != v != w, Brandes
/// accumulation. Per-source work is split into contiguous chunks, one per
/// job, and reduced in chunk order, so results depend only on `jobs`.
inline std::vector<double> betweenness(const Graph& g, const BetweennessOptions& opt = {}) {
  const auto n = g.num_nodes();
  std::vector<NodeId> sources;
  double scale = 0.5;  // each unordered pair is seen from both ends
  if (opt.pivots > 0 && opt.pivots < n) {
    std::vector<NodeId> all(n);
    for (NodeId i = 0; i < n; ++i) all[i] = i;
    Rng rng(derive_seed(opt.seed, "pivots"));
    shuffle(all.begin(), all.end(), rng);
    sources.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(opt.pivots));
    std::sort(sources.begin(), sources.end());
    scale *= static_cast<double>(n) / static_cast<double>(opt.pivots);
  } else {
    sources.resize(n);
    for (NodeId i = 0; i < n; ++i) sources[i] = i;
  }

  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(std::max<std::size_t>(1, sources.size()))));
  std::vector<std::vector<double>> partial(jobs, std::vector<double>(n, 0.0));
  auto work = [&](unsigned j) {
    detail::BrandesWorkspace ws(n);
    const std::size_t lo = sources.size() * j / jobs, hi = sources.size() * (j + 1) / jobs;
    for (std::size_t i = lo; i < hi; ++i) ws.run(g, sources[i], partial[j]);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(work, j);
    for (auto& t : threads) t.join();
  }

  std::vector<double> bc(n, 0.0);
  for (const auto& p : partial)
    for (std::size_t v = 0; v < n; ++v) bc[v] += p[v];
  double norm = 1.0;
  if (opt.normalized && n > 2) norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  for (double& b : bc) b = b * scale / norm;
  return bc;
}

}  // namespace hiersage
