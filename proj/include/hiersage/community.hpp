#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/feature_matrix.hpp"
#include "hiersage/graph.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

/// Community id per node; ids are dense in [0, count).
struct Partition {
  std::vector<int> community;
  int count = 0;

  /// Renumbers ids densely by first appearance in node order.
  static Partition from_ids(const std::vector<int>& ids) {
    Partition p;
    std::map<int, int> remap;
    p.community.reserve(ids.size());
    for (int c : ids) {
      auto [it, inserted] = remap.emplace(c, p.count);
      if (inserted) ++p.count;
      p.community.push_back(it->second);
    }
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return from_ids(ids);
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s(static_cast<std::size_t>(count), 0);
    for (int c : community) ++s[static_cast<std::size_t>(c)];
    return s;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Newman modularity Q = sum_c [ e_c/m - (deg_c / 2m)^2 ].
inline double modularity(const Graph& g, const Partition& p) {
  const auto m = static_cast<double>(g.num_edges());
  if (g.num_edges() == 0) throw Error("modularity is undefined on a graph without edges");
  if (p.community.size() != g.num_nodes()) throw Error("partition size does not match graph");
  std::vector<double> intra(static_cast<std::size_t>(p.count), 0.0), deg(static_cast<std::size_t>(p.count), 0.0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const auto cu = static_cast<std::size_t>(p.community[u]);
    deg[cu] += static_cast<double>(g.degree(u));
    for (NodeId v : g.neighbors(u))
      if (u < v && p.community[v] == p.community[u]) intra[cu] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < intra.size(); ++c) q += intra[c] / m - (deg[c] / (2.0 * m)) * (deg[c] / (2.0 * m));
  return q;
}

namespace detail {

// Weighted graph for one Louvain level. self[i] holds the doubled internal
// weight so that strength[i] = self[i] + sum of incident weights.
struct LouvainLevel {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self;
  std::vector<double> strength;
  double total = 0.0;  // 2m

  std::size_t size() const { return adj.size(); }
};

inline LouvainLevel level_from_graph(const Graph& g) {
  LouvainLevel L;
  const auto n = g.num_nodes();
  L.adj.resize(n);
  L.self.assign(n, 0.0);
  L.strength.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) L.adj[u].emplace_back(static_cast<int>(v), 1.0);
    L.strength[u] = static_cast<double>(g.degree(u));
    L.total += L.strength[u];
  }
  return L;
}

// One round of local moves; returns true if any node moved.
inline bool louvain_local_moves(const LouvainLevel& L, std::vector<int>& comm, Rng& rng) {
  const auto n = L.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[static_cast<std::size_t>(comm[i])] += L.strength[i];
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool any = false;
  constexpr double kEps = 1e-12;
  for (bool improved = true; improved;) {
    improved = false;
    for (int i : order) {
      const auto ui = static_cast<std::size_t>(i);
      const int own = comm[ui];
      const double ki = L.strength[ui];
      for (auto [j, w] : L.adj[ui]) {
        const int c = comm[static_cast<std::size_t>(j)];
        if (link[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        link[static_cast<std::size_t>(c)] += w;
      }
      tot[static_cast<std::size_t>(own)] -= ki;
      auto gain = [&](int c) { return link[static_cast<std::size_t>(c)] - tot[static_cast<std::size_t>(c)] * ki / L.total; };
      const double stay = gain(own);
      int best = own;
      double best_gain = stay;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == own) continue;
        const double gc = gain(c);
        if (gc > stay + kEps && (best == own || gc > best_gain + kEps)) {
          best = c;
          best_gain = gc;
        }
      }
      tot[static_cast<std::size_t>(best)] += ki;
      if (best != own) {
        comm[ui] = best;
        improved = any = true;
      }
      for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
      touched.clear();
    }
  }
  return any;
}

inline LouvainLevel aggregate_level(const LouvainLevel& L, const std::vector<int>& comm, int k) {
  LouvainLevel out;
  out.adj.resize(static_cast<std::size_t>(k));
  out.self.assign(static_cast<std::size_t>(k), 0.0);
  out.strength.assign(static_cast<std::size_t>(k), 0.0);
  out.total = L.total;
  std::vector<std::map<int, double>> acc(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < L.size(); ++i) {
    const auto ci = static_cast<std::size_t>(comm[i]);
    out.self[ci] += L.self[i];
    out.strength[ci] += L.strength[i];
    for (auto [j, w] : L.adj[i]) {
      const int cj = comm[static_cast<std::size_t>(j)];
      if (static_cast<std::size_t>(cj) == ci)
        out.self[ci] += w;
      else
        acc[ci][cj] += w;
    }
  }
  for (std::size_t c = 0; c < acc.size(); ++c)
    for (auto [d, w] : acc[c]) out.adj[c].emplace_back(d, w);
  return out;
}

}  // namespace detail

/// Multi-level Louvain; returns the coarsest level's partition. Node visiting
/// order is a seeded permutation. A move requires a strictly positive gain;
/// ties between targets go to the lowest community id.
inline Partition louvain(const Graph& g, std::uint64_t seed) {
  const auto n = g.num_nodes();
  if (g.num_edges() == 0) return Partition::singletons(n);
  Rng rng(derive_seed(seed, "louvain"));
  detail::LouvainLevel level = detail::level_from_graph(g);
  std::vector<int> node_comm(n);
  std::iota(node_comm.begin(), node_comm.end(), 0);
  for (;;) {
    std::vector<int> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0);
    if (!detail::louvain_local_moves(level, comm, rng)) break;
    Partition dense = Partition::from_ids(comm);
    for (auto& c : node_comm) c = dense.community[static_cast<std::size_t>(c)];
    if (static_cast<std::size_t>(dense.count) == level.size()) break;
    level = detail::aggregate_level(level, dense.community, dense.count);
  }
  return Partition::from_ids(node_comm);
}

/// Extends a partition of a subgraph to the full graph: unassigned nodes
/// repeatedly take the most common community among assigned neighbours
/// (lowest id on ties); nodes never reached become singletons.
inline Partition extend_partition(const Graph& full, const Subgraph& sub, const Partition& p) {
  const auto n = full.num_nodes();
  std::vector<int> comm(n, -1);
  for (std::size_t i = 0; i < sub.new_to_old.size(); ++i) comm[sub.new_to_old[i]] = p.community[i];
  int next = p.count;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> update = comm;
    for (NodeId u = 0; u < n; ++u) {
      if (comm[u] >= 0) continue;
      std::map<int, int> votes;
      for (NodeId v : full.neighbors(u))
        if (comm[v] >= 0) ++votes[comm[v]];
      int best = -1, best_votes = 0;
      for (auto [c, k] : votes)
        if (k > best_votes) {
          best = c;
          best_votes = k;
        }
      if (best >= 0) {
        update[u] = best;
        changed = true;
      }
    }
    comm = std::move(update);
  }
  for (auto& c : comm)
    if (c < 0) c = next++;
  Partition out;
  out.community = std::move(comm);
  out.count = next;
  return out;
}

/// n × max_k indicator matrix. With more than max_k communities, the
/// max_k - 1 largest keep their own column and the rest share "comm_other".
inline FeatureMatrix one_hot_communities(const Partition& p, std::size_t max_k) {
  if (max_k == 0) throw Error("one_hot_communities: max_k must be >= 1");
  const auto sizes = p.sizes();
  std::vector<int> rank(sizes.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
    return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
  });
  const bool overflow = sizes.size() > max_k;
  std::vector<std::size_t> column(sizes.size(), max_k - 1);
  for (std::size_t r = 0; r < rank.size(); ++r)
    if (!overflow || r + 1 < max_k) column[static_cast<std::size_t>(rank[r])] = r;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < max_k; ++c)
    names.push_back(overflow && c + 1 == max_k ? std::string("comm_other") : "comm_" + std::to_string(c));
  FeatureMatrix m(p.community.size(), std::move(names));
  for (std::size_t c = 0; c < max_k; ++c) m.set_one_hot(c);
  for (std::size_t u = 0; u < p.community.size(); ++u) m(u, column[static_cast<std::size_t>(p.community[u])]) = 1.0;
  return m;
}

}  // namespace hiersage
