#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "hiersage/graph.hpp"
#include "hiersage/hierarchy.hpp"

namespace hiersage {

/// Row i, column j: share of label-j nodes among the labeled neighbours of
/// label-i nodes. Classes are in hierarchy pre-order (leaf index order).
struct NeighbourhoodLabelMatrix {
  std::size_t classes = 0;
  double row_sum = 1.0;
  std::vector<double> values;        // row-major classes × classes
  std::vector<std::size_t> support;  // neighbour count behind each row

  double operator()(std::size_t i, std::size_t j) const { return values[i * classes + j]; }
};

/// Unlabeled nodes are skipped on both ends. Rows without support are all
/// zero.
inline NeighbourhoodLabelMatrix neighbourhood_label_matrix(const Graph& g, std::span<const int> labels,
                                                           const LabelHierarchy& h, double row_sum = 1.0) {
  const std::size_t k = h.num_leaves();
  NeighbourhoodLabelMatrix A{k, row_sum, std::vector<double>(k * k, 0.0), std::vector<std::size_t>(k, 0)};
  std::vector<std::size_t> counts(k * k, 0);
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const int lu = labels[u];
    if (lu < 0) continue;
    for (NodeId v : g.neighbors(u)) {
      const int lv = labels[v];
      if (lv < 0) continue;
      ++counts[static_cast<std::size_t>(lu) * k + static_cast<std::size_t>(lv)];
      ++A.support[static_cast<std::size_t>(lu)];
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (A.support[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j)
      A.values[i * k + j] = row_sum * static_cast<double>(counts[i * k + j]) / static_cast<double>(A.support[i]);
  }
  return A;
}

/// Fraction of classes (excluding `star` rows) whose diagonal entry is the
/// maximum of their row. With `ignore_star_columns`, star columns do not
/// compete with the diagonal. Rows without support are not counted.
inline double diagonal_dominance(const NeighbourhoodLabelMatrix& A, const std::vector<int>& star = {},
                                 bool ignore_star_columns = false) {
  std::set<std::size_t> stars;
  for (int s : star) stars.insert(static_cast<std::size_t>(s));
  std::size_t rows = 0, hits = 0;
  for (std::size_t i = 0; i < A.classes; ++i) {
    if (stars.count(i) || A.support[i] == 0) continue;
    ++rows;
    bool max = true;
    for (std::size_t j = 0; j < A.classes; ++j)
      if (j != i && !(ignore_star_columns && stars.count(j)) && A(i, j) > A(i, i)) max = false;
    hits += max;
  }
  return rows ? static_cast<double>(hits) / static_cast<double>(rows) : 0.0;
}

/// (class, count) by descending count, ties by class id. Unlabeled nodes
/// are ignored.
inline std::vector<std::pair<int, std::size_t>> label_distribution(std::span<const int> labels) {
  std::vector<std::size_t> count;
  for (int l : labels) {
    if (l < 0) continue;
    if (static_cast<std::size_t>(l) >= count.size()) count.resize(static_cast<std::size_t>(l) + 1, 0);
    ++count[static_cast<std::size_t>(l)];
  }
  std::vector<std::pair<int, std::size_t>> out;
  for (std::size_t c = 0; c < count.size(); ++c)
    if (count[c]) out.emplace_back(static_cast<int>(c), count[c]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

/// hist[d] = number of nodes whose labeled neighbours carry d distinct labels.
inline std::vector<std::size_t> distinct_labels_per_node(const Graph& g, std::span<const int> labels) {
  std::vector<std::size_t> hist(1, 0);
  std::vector<int> seen;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    seen.clear();
    for (NodeId v : g.neighbors(u))
      if (labels[v] >= 0) seen.push_back(labels[v]);
    std::sort(seen.begin(), seen.end());
    const auto d = static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    if (d >= hist.size()) hist.resize(d + 1, 0);
    ++hist[d];
  }
  return hist;
}

}  // namespace hiersage
