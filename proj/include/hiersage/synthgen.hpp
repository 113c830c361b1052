#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/feature_matrix.hpp"
#include "hiersage/graph.hpp"
#include "hiersage/hierarchy.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

enum class ClassSizes { Uniform, Geometric };

/// Stochastic block model over a groups × leaves taxonomy. Defaults are the
/// benchmark configuration.
struct SynthConfig {
  std::size_t groups = 2;
  std::size_t leaves_per_group = 3;
  std::size_t n = 1200;
  ClassSizes sizes = ClassSizes::Geometric;
  double rho = 0.6;
  double p_same = 0.02;
  double p_sibling = 0.008;
  double p_far = 0.002;
  std::size_t star_classes = 1;  // the largest classes
  double p_star = 0.004;
  /// Probability that the coarse node attribute equals the node's group.
  double attribute_correlation = 0.8;
  /// Reject configurations where some class has expected degree < 1.
  bool strict = false;
  std::uint64_t seed = 0;
};

struct SynthDataset {
  Graph graph;
  std::vector<int> labels;
  LabelHierarchy hierarchy;
  NodeTable nodes;
  std::vector<int> star_classes;
  FeatureMatrix attributes;  // noisy one-hot of the group
};

/// Node count per class (leaf index order). Geometric sizes are proportional
/// to rho^c, rounded by largest remainder, each class keeping >= 1 node.
inline std::vector<std::size_t> class_sizes(const SynthConfig& cfg) {
  const std::size_t k = cfg.groups * cfg.leaves_per_group;
  if (k == 0) throw Error("synth: need at least one class");
  if (cfg.n < k) throw Error("synth: n must be at least groups * leaves");
  if (cfg.sizes == ClassSizes::Geometric && !(cfg.rho > 0.0 && cfg.rho <= 1.0)) throw Error("synth: rho must lie in (0, 1]");
  std::vector<double> w(k, 1.0);
  if (cfg.sizes == ClassSizes::Geometric)
    for (std::size_t c = 1; c < k; ++c) w[c] = w[c - 1] * cfg.rho;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::size_t> size(k);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t c = 0; c < k; ++c) {
    const double exact = static_cast<double>(cfg.n) * w[c] / total;
    size[c] = static_cast<std::size_t>(std::floor(exact));
    used += size[c];
    rem.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < cfg.n; ++i, ++used) ++size[rem[i % k].second];
  for (std::size_t c = k; c-- > 0;) {
    if (size[c] > 0) continue;
    auto big = static_cast<std::size_t>(std::max_element(size.begin(), size.end()) - size.begin());
    --size[big];
    ++size[c];
  }
  return size;
}

inline void validate(const SynthConfig& cfg) {
  const auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!(in01(cfg.p_same) && in01(cfg.p_sibling) && in01(cfg.p_far) && in01(cfg.p_star)))
    throw Error("synth: probabilities must lie in [0, 1]");
  if (!(cfg.p_same >= cfg.p_sibling && cfg.p_sibling >= cfg.p_far))
    throw Error("synth: require p_same >= p_sibling >= p_far");
  if (!in01(cfg.attribute_correlation)) throw Error("synth: attribute correlation must lie in [0, 1]");
  if (cfg.star_classes > cfg.groups * cfg.leaves_per_group) throw Error("synth: more star classes than classes");
}

/// Edge probability between classes a and b.
inline double block_probability(const SynthConfig& cfg, std::size_t a, std::size_t b) {
  double p = a == b ? cfg.p_same : (a / cfg.leaves_per_group == b / cfg.leaves_per_group ? cfg.p_sibling : cfg.p_far);
  if (a != b && (a < cfg.star_classes || b < cfg.star_classes)) p = 1.0 - (1.0 - p) * (1.0 - cfg.p_star);
  return p;
}

inline SynthDataset generate(const SynthConfig& cfg) {
  validate(cfg);
  const std::size_t k = cfg.groups * cfg.leaves_per_group;
  const auto sizes = class_sizes(cfg);

  if (cfg.strict)
    for (std::size_t a = 0; a < k; ++a) {
      double expected = 0.0;
      for (std::size_t b = 0; b < k; ++b)
        expected += block_probability(cfg, a, b) * static_cast<double>(a == b ? sizes[b] - 1 : sizes[b]);
      if (expected < 1.0) throw Error("synth: class " + std::to_string(a) + " has expected degree " + std::to_string(expected) + " < 1");
    }

  SynthDataset d;
  d.hierarchy = make_hierarchy({cfg.groups, cfg.leaves_per_group});
  for (std::size_t s = 0; s < cfg.star_classes; ++s) d.star_classes.push_back(static_cast<int>(s));

  // Labels in class order, then shuffled over node ids.
  std::vector<int> labels;
  for (std::size_t c = 0; c < k; ++c) labels.insert(labels.end(), sizes[c], static_cast<int>(c));
  Rng label_rng(derive_seed(cfg.seed, "labels"));
  shuffle(labels.begin(), labels.end(), label_rng);
  std::vector<std::vector<NodeId>> members(k);
  for (NodeId u = 0; u < cfg.n; ++u) members[static_cast<std::size_t>(labels[u])].push_back(u);

  // Per block pair, Bernoulli(p) over all node pairs via geometric skips.
  std::vector<Edge> edges;
  const std::uint64_t edge_stream = derive_seed(cfg.seed, "edges");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a; b < k; ++b) {
      const double p = block_probability(cfg, a, b);
      if (p <= 0.0) continue;
      Rng rng(derive_seed(edge_stream, a * k + b));
      const auto& A = members[a];
      const auto& B = members[b];
      const std::uint64_t pairs = a == b ? A.size() * (A.size() - (A.empty() ? 0 : 1)) / 2 : A.size() * B.size();
      // Indices arrive in increasing order, so the triangle row is tracked
      // incrementally. Row r of the strict upper triangle holds (r, r+1..m-1).
      std::uint64_t row = 0, row_start = 0;
      auto emit = [&](std::uint64_t idx) {
        if (a != b) {
          edges.emplace_back(A[idx / B.size()], B[idx % B.size()]);
          return;
        }
        const std::uint64_t m = A.size();
        while (idx >= row_start + (m - 1 - row)) {
          row_start += m - 1 - row;
          ++row;
        }
        edges.emplace_back(A[row], A[row + 1 + (idx - row_start)]);
      };
      if (p >= 1.0) {
        for (std::uint64_t i = 0; i < pairs; ++i) emit(i);
        continue;
      }
      const double log_q = std::log1p(-p);
      for (std::uint64_t i = 0;;) {
        const double u = 1.0 - uniform01(rng);  // (0, 1]
        const double skip = std::floor(std::log(u) / log_q);
        if (skip >= static_cast<double>(pairs - i)) break;
        i += static_cast<std::uint64_t>(skip);
        emit(i);
        if (++i >= pairs) break;
      }
    }
  d.graph = Graph::from_edges(cfg.n, edges);
  d.labels = labels;
  for (NodeId u = 0; u < cfg.n; ++u) d.nodes.add("n" + std::to_string(u), labels[u]);

  std::vector<std::string> cols;
  for (std::size_t gidx = 0; gidx < cfg.groups; ++gidx) cols.push_back("onehot:attr_" + std::to_string(gidx));
  d.attributes = FeatureMatrix(cfg.n, cols);
  for (std::size_t c = 0; c < cfg.groups; ++c) d.attributes.set_one_hot(c);
  Rng attr_rng(derive_seed(cfg.seed, "attributes"));
  for (NodeId u = 0; u < cfg.n; ++u) {
    const std::size_t group = static_cast<std::size_t>(labels[u]) / cfg.leaves_per_group;
    std::size_t value = group;
    if (cfg.groups > 1 && uniform01(attr_rng) >= cfg.attribute_correlation) {
      value = uniform_index(attr_rng, cfg.groups - 1);
      if (value >= group) ++value;
    }
    d.attributes(u, value) = 1.0;
  }
  return d;
}

/// Mean over labeled nodes (with at least one labeled neighbour) of the
/// fraction of labeled neighbours sharing the leaf label, and the parent group.
inline std::pair<double, double> empirical_homophily(const Graph& g, std::span<const int> labels, const LabelHierarchy& h) {
  double leaf_sum = 0.0, group_sum = 0.0;
  std::size_t counted = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    if (labels[u] < 0) continue;
    const ClassNode cu = h.leaf(labels[u]);
    std::size_t total = 0, same = 0, group = 0;
    for (NodeId v : g.neighbors(u)) {
      if (labels[v] < 0) continue;
      const ClassNode cv = h.leaf(labels[v]);
      ++total;
      same += cv == cu;
      group += h.parent(cv) == h.parent(cu);
    }
    if (total == 0) continue;
    leaf_sum += static_cast<double>(same) / static_cast<double>(total);
    group_sum += static_cast<double>(group) / static_cast<double>(total);
    ++counted;
  }
  if (counted == 0) return {0.0, 0.0};
  return {leaf_sum / static_cast<double>(counted), group_sum / static_cast<double>(counted)};
}

}  // namespace hiersage
