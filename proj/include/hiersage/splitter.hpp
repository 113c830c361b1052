#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/graph.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

enum class Role : std::uint8_t { Train = 0, Val = 1, Test = 2 };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::Train: return "train";
    case Role::Val: return "val";
    case Role::Test: return "test";
  }
  return "?";
}

inline Role role_from_string(const std::string& s) {
  if (s == "train") return Role::Train;
  if (s == "val") return Role::Val;
  if (s == "test") return Role::Test;
  throw Error("unknown role '" + s + "'");
}

struct SplitFractions {
  double train = 0.7;
  double val = 0.2;
  double test = 0.1;
};

struct SplitAssignment {
  std::vector<Role> role;
  SplitFractions fractions;
  std::uint64_t seed = 0;

  std::vector<NodeId> nodes(Role r) const {
    std::vector<NodeId> out;
    for (NodeId u = 0; u < role.size(); ++u)
      if (role[u] == r) out.push_back(u);
    return out;
  }
  std::size_t count(Role r) const {
    std::size_t k = 0;
    for (Role x : role) k += x == r;
    return k;
  }
};

/// Node counts for the three roles: test and val are rounded, train takes the rest.
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const SplitFractions& f) {
  const double sum = f.train + f.val + f.test;
  if (f.train < 0 || f.val < 0 || f.test < 0 || std::abs(sum - 1.0) > 1e-9)
    throw Error("split fractions must be non-negative and sum to 1");
  const auto n_te = static_cast<std::size_t>(std::llround(f.test * static_cast<double>(n)));
  const auto n_va = static_cast<std::size_t>(std::llround(f.val * static_cast<double>(n)));
  if (n_te + n_va > n) throw Error("split fractions leave no room for training nodes");
  return {n - n_te - n_va, n_va, n_te};
}

/// The three evaluation graphs, all on the original node ids.
///   g_tr: induced on V_tr (non-train nodes are kept isolated, see `train`)
///   g_va: induced on V_tr ∪ V_va minus val–val edges
///   g_te: all nodes minus test–test edges
struct SplitGraphs {
  Subgraph train;  // compact relabeled copy of g_tr
  Graph g_tr;      // g_tr on original ids (nodes outside V_tr isolated)
  Graph g_va;
  Graph g_te;
  std::vector<bool> in_va;  // node set of g_va
};

inline SplitGraphs build_split_graphs(const Graph& g, const SplitAssignment& s) {
  if (s.role.size() != g.num_nodes()) throw Error("split does not cover the graph");
  std::vector<Edge> tr, va, te;
  for (auto [u, v] : g.edges()) {
    const Role a = s.role[u], b = s.role[v];
    if (a == Role::Train && b == Role::Train) tr.emplace_back(u, v);
    if (a != Role::Test && b != Role::Test && !(a == Role::Val && b == Role::Val)) va.emplace_back(u, v);
    if (!(a == Role::Test && b == Role::Test)) te.emplace_back(u, v);
  }
  SplitGraphs out;
  const auto n = g.num_nodes();
  out.g_tr = Graph::from_edges(n, tr);
  out.g_va = Graph::from_edges(n, va);
  out.g_te = Graph::from_edges(n, te);
  out.train = induced_subgraph(g, s.nodes(Role::Train));
  out.in_va.resize(n);
  for (NodeId u = 0; u < n; ++u) out.in_va[u] = s.role[u] != Role::Test;
  return out;
}

/// Connectivity diagnostics of one split attempt.
struct SplitReport {
  std::size_t train_components = 0;
  std::size_t isolated_val = 0;   // val nodes without an edge in g_va
  std::size_t isolated_test = 0;  // test nodes without an edge in g_te
  bool va_connected = false;      // g_va connected on its node set
  bool te_connected = false;
  std::size_t attempts = 0;

  bool ok(bool strict) const {
    const bool base = train_components == 1 && isolated_val == 0 && isolated_test == 0;
    return strict ? base && va_connected && te_connected : base;
  }
};

namespace detail {

inline bool connected_on(const Graph& g, const std::vector<bool>& members) {
  std::size_t k = 0;
  auto comp = connected_components(g, &k);
  NodeId seen = Subgraph::kAbsent;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (!members[u]) continue;
    if (seen == Subgraph::kAbsent) seen = comp[u];
    if (comp[u] != seen) return false;
  }
  return true;
}

}  // namespace detail

inline SplitReport check_split(const Graph& g, const SplitAssignment& s, const SplitGraphs& sg) {
  SplitReport r;
  connected_components(sg.train.graph, &r.train_components);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (s.role[u] == Role::Val && sg.g_va.degree(u) == 0) ++r.isolated_val;
    if (s.role[u] == Role::Test && sg.g_te.degree(u) == 0) ++r.isolated_test;
  }
  r.va_connected = detail::connected_on(sg.g_va, sg.in_va);
  r.te_connected = is_connected(sg.g_te);
  return r;
}

struct SplitOptions {
  SplitFractions fractions;
  std::uint64_t seed = 0;
  std::size_t max_retries = 1000;
  /// Demand g_va and g_te connected as well, not only free of isolated
  /// evaluation nodes.
  bool strict = false;
};

class SplitError : public Error {
 public:
  SplitError(const std::string& what, SplitAssignment best, SplitReport report)
      : Error(what), best_(std::move(best)), report_(report) {}
  const SplitAssignment& best_attempt() const noexcept { return best_; }
  const SplitReport& report() const noexcept { return report_; }

 private:
  SplitAssignment best_;
  SplitReport report_;
};

/// Uniform role assignment with exact role sizes, resampled until the split
/// graphs satisfy the connectivity requirement. Attempt i draws from the
/// sub-stream (seed, i), so the result depends only on the seed.
inline SplitAssignment make_split(const Graph& g, const SplitOptions& opt = {}, SplitReport* report = nullptr) {
  const auto n = g.num_nodes();
  if (n < 10) throw Error("make_split needs at least 10 nodes");
  const auto sizes = split_sizes(n, opt.fractions);
  std::vector<Role> base;
  base.insert(base.end(), sizes[0], Role::Train);
  base.insert(base.end(), sizes[1], Role::Val);
  base.insert(base.end(), sizes[2], Role::Test);

  const std::uint64_t stream = derive_seed(opt.seed, "split");
  SplitAssignment best;
  SplitReport best_report;
  std::size_t best_score = static_cast<std::size_t>(-1);
  const std::size_t attempts = std::max<std::size_t>(1, opt.max_retries);
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    Rng rng(derive_seed(stream, attempt));
    SplitAssignment s{base, opt.fractions, opt.seed};
    shuffle(s.role.begin(), s.role.end(), rng);
    auto sg = build_split_graphs(g, s);
    auto r = check_split(g, s, sg);
    r.attempts = attempt + 1;
    if (r.ok(opt.strict)) {
      if (report) *report = r;
      return s;
    }
    const std::size_t score = r.train_components + r.isolated_val + r.isolated_test + !r.va_connected + !r.te_connected;
    if (score < best_score) {
      best_score = score;
      best = s;
      best_report = r;
    }
  }
  best_report.attempts = attempts;
  throw SplitError("no connected split found in " + std::to_string(attempts) + " attempts (best: " +
                       std::to_string(best_report.train_components) + " training components, " +
                       std::to_string(best_report.isolated_val) + " isolated val, " +
                       std::to_string(best_report.isolated_test) + " isolated test)",
                   best, best_report);
}

inline void write_split_tsv(std::ostream& out, const SplitAssignment& s) {
  for (NodeId u = 0; u < s.role.size(); ++u) out << u << '\t' << to_string(s.role[u]) << '\n';
}

inline SplitAssignment read_split_tsv(std::istream& in, std::size_t n) {
  SplitAssignment s;
  s.role.assign(n, Role::Train);
  std::vector<bool> seen(n, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 2) throw ParseError("expected node_id<TAB>role", lineno);
    std::size_t id = 0;
    try {
      id = std::stoul(f[0]);
    } catch (const std::logic_error&) {
      throw ParseError("bad node id '" + f[0] + "'", lineno);
    }
    if (id >= n) throw ParseError("node id " + f[0] + " out of range", lineno);
    if (seen[id]) throw ParseError("node " + f[0] + " listed twice", lineno);
    seen[id] = true;
    try {
      s.role[id] = role_from_string(f[1]);
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  for (std::size_t u = 0; u < n; ++u)
    if (!seen[u]) throw ParseError("split file misses node " + std::to_string(u), 0);
  return s;
}

}  // namespace hiersage
