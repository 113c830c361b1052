#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hiersage/error.hpp"

namespace hiersage {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in CSR form. Adjacency lists are sorted,
/// free of duplicates and self-loops, and symmetric.
class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Builds from an arbitrary edge multiset; self-loops are dropped and
  /// parallel/reversed edges merged. Endpoints must be < n.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::size_t> deg(n, 0);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw Error("edge endpoint out of range");
      if (u == v) continue;
      ++deg[u];
      ++deg[v];
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
    g.targets_.resize(g.offsets_[n]);
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) {
      if (u == v) continue;
      g.targets_[fill[u]++] = v;
      g.targets_[fill[v]++] = u;
    }
    // Sort and dedupe each list, then compact.
    std::vector<std::size_t> compact(n + 1, 0);
    std::size_t out = 0;
    for (std::size_t u = 0; u < n; ++u) {
      auto first = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
      auto last = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
      std::sort(first, last);
      auto end = std::unique(first, last);
      compact[u] = out;
      for (auto it = first; it != end; ++it) g.targets_[out++] = *it;
    }
    compact[n] = out;
    g.targets_.resize(out);
    g.offsets_ = std::move(compact);
    return g;
  }

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId u) const {
    check(u);
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }

  std::size_t degree(NodeId u) const {
    check(u);
    return offsets_[u + 1] - offsets_[u];
  }

  bool has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u)
      for (NodeId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Full scan of the structural invariants.
  bool is_valid() const {
    const auto n = num_nodes();
    for (NodeId u = 0; u < n; ++u) {
      auto nb = neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] >= n || nb[i] == u) return false;
        if (i > 0 && nb[i - 1] >= nb[i]) return false;
        if (!has_edge(nb[i], u)) return false;
      }
    }
    return targets_.size() % 2 == 0;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check(NodeId u) const {
    if (u >= num_nodes()) throw Error("node id " + std::to_string(u) + " out of range");
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

inline std::size_t degree(const Graph& g, NodeId u) { return g.degree(u); }

/// External names and optional leaf-class labels of the nodes.
class NodeTable {
 public:
  static constexpr int kUnlabeled = -1;

  NodeId add(const std::string& name, int label = kUnlabeled) {
    if (index_.count(name)) throw Error("duplicate node name '" + name + "'");
    const auto id = static_cast<NodeId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    labels_.push_back(label);
    return id;
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(NodeId u) const { return names_.at(u); }
  std::optional<NodeId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int label(NodeId u) const { return labels_.at(u); }
  void set_label(NodeId u, int label) { labels_.at(u) = label; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
  std::vector<int> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

namespace detail {

inline bool skip_line(const std::string& line) {
  return line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos;
}

inline std::vector<std::string> split_tabs(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

/// Reads `u<TAB>v` lines. Without a node table, ids follow first appearance
/// and `table_out` (if given) receives the discovered names.
inline Graph load_edge_list(std::istream& in, const NodeTable* nodes = nullptr,
                            NodeTable* table_out = nullptr) {
  NodeTable discovered;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  auto resolve = [&](const std::string& name) -> NodeId {
    if (name.empty()) throw ParseError("empty node identifier", lineno);
    if (nodes) {
      auto id = nodes->find(name);
      if (!id) throw ParseError("unknown node '" + name + "'", lineno);
      return *id;
    }
    if (auto id = discovered.find(name)) return *id;
    return discovered.add(name);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 2) throw ParseError("expected two tab-separated node identifiers", lineno);
    const NodeId u = resolve(fields[0]);
    const NodeId v = resolve(fields[1]);
    edges.emplace_back(u, v);
  }
  const std::size_t n = nodes ? nodes->size() : discovered.size();
  if (table_out && !nodes) *table_out = std::move(discovered);
  return Graph::from_edges(n, edges);
}

/// Edges with u<v sorted by id, written by external name.
inline void write_edge_list(std::ostream& out, const Graph& g, const NodeTable& nodes) {
  for (auto [u, v] : g.edges()) out << nodes.name(u) << '\t' << nodes.name(v) << '\n';
}

/// Reads `id<TAB>name<TAB>label-or-"-"` rows. `resolve_label` maps a label
/// name to a leaf-class index or throws.
template <typename LabelResolver>
NodeTable load_node_table(std::istream& in, LabelResolver&& resolve_label) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::vector<bool> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 3) throw ParseError("expected id<TAB>name<TAB>label", lineno);
    std::size_t id = 0;
    try {
      std::size_t pos = 0;
      id = std::stoul(f[0], &pos);
      if (pos != f[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw ParseError("bad node id '" + f[0] + "'", lineno);
    }
    if (id >= rows.size()) {
      rows.resize(id + 1);
      seen.resize(id + 1, false);
    }
    if (seen[id]) throw ParseError("duplicate node id " + f[0], lineno);
    seen[id] = true;
    rows[id] = {f[1], f[2]};
  }
  NodeTable table;
  for (std::size_t id = 0; id < rows.size(); ++id) {
    if (!seen[id]) throw ParseError("node ids are not dense: missing " + std::to_string(id), 0);
    const auto& [name, label] = rows[id];
    table.add(name, label == "-" ? NodeTable::kUnlabeled : resolve_label(label));
  }
  return table;
}

template <typename LabelName>
void write_node_table(std::ostream& out, const NodeTable& nodes, LabelName&& label_name) {
  for (NodeId u = 0; u < nodes.size(); ++u) {
    out << u << '\t' << nodes.name(u) << '\t';
    if (nodes.label(u) == NodeTable::kUnlabeled)
      out << '-';
    else
      out << label_name(nodes.label(u));
    out << '\n';
  }
}

/// Result of a relabeling operation; `old_to_new[u]` is kAbsent for dropped nodes.
struct Subgraph {
  static constexpr NodeId kAbsent = static_cast<NodeId>(-1);
  Graph graph;
  std::vector<NodeId> old_to_new;
  std::vector<NodeId> new_to_old;
};

/// Component id per node, numbered by smallest member id.
inline std::vector<NodeId> connected_components(const Graph& g, std::size_t* count = nullptr) {
  const auto n = g.num_nodes();
  std::vector<NodeId> comp(n, Subgraph::kAbsent);
  NodeId next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != Subgraph::kAbsent) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId v : g.neighbors(u))
        if (comp[v] == Subgraph::kAbsent) {
          comp[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

inline bool is_connected(const Graph& g) {
  std::size_t k = 0;
  connected_components(g, &k);
  return k <= 1;
}

inline Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
  Subgraph s;
  s.old_to_new.assign(g.num_nodes(), Subgraph::kAbsent);
  std::vector<NodeId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (NodeId u : sorted) {
    if (u >= g.num_nodes()) throw Error("induced_subgraph: node id out of range");
    s.old_to_new[u] = static_cast<NodeId>(s.new_to_old.size());
    s.new_to_old.push_back(u);
  }
  std::vector<Edge> edges;
  for (NodeId u : sorted)
    for (NodeId v : g.neighbors(u))
      if (u < v && s.old_to_new[v] != Subgraph::kAbsent) edges.emplace_back(s.old_to_new[u], s.old_to_new[v]);
  s.graph = Graph::from_edges(sorted.size(), edges);
  return s;
}

/// Largest component; ties go to the component holding the smallest id.
inline Subgraph largest_connected_component(const Graph& g) {
  std::size_t k = 0;
  auto comp = connected_components(g, &k);
  if (k == 0) return Subgraph{};
  std::vector<std::size_t> size(k, 0);
  for (NodeId c : comp) ++size[c];
  // Components are numbered by smallest member, so the first maximum wins ties.
  const auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeId> keep;
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    if (comp[u] == best) keep.push_back(u);
  return induced_subgraph(g, keep);
}

/// Single-source BFS hop distances; unreachable nodes get -1.
inline std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(g.num_nodes(), -1);
  std::queue<NodeId> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop();
    for (NodeId v : g.neighbors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
  }
  return dist;
}

}  // namespace hiersage
