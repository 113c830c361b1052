#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hiersage/analysis.hpp"
#include "hiersage/synthgen.hpp"
#include "oracles.hpp"

using namespace hiersage;

namespace {

const LabelHierarchy& abc() {
  static const auto h = make_hierarchy({3});  // leaves c0 c1 c2 stand for a b c
  return h;
}

}  // namespace

TEST(LabelMatrix, SingleEdge) {
  auto g = oracle::from_pairs(2, {{0, 1}});
  std::vector<int> labels{0, 1};
  auto A = neighbourhood_label_matrix(g, labels, abc());
  EXPECT_EQ(A(0, 1), 1.0);
  EXPECT_EQ(A(1, 0), 1.0);
  EXPECT_EQ(A(0, 0), 0.0);
  EXPECT_EQ(A(1, 1), 0.0);
}

TEST(LabelMatrix, MonochromaticTriangle) {
  std::vector<int> labels{0, 0, 0};
  auto A = neighbourhood_label_matrix(oracle::clique(3), labels, abc());
  EXPECT_EQ(A(0, 0), 1.0);
}

TEST(LabelMatrix, StarCounts) {
  auto g = oracle::from_pairs(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  std::vector<int> labels{0, 1, 1, 1, 2};
  auto A = neighbourhood_label_matrix(g, labels, abc());
  EXPECT_EQ(A(0, 0), 0.0);
  EXPECT_EQ(A(0, 1), 0.75);
  EXPECT_EQ(A(0, 2), 0.25);
}

TEST(LabelMatrix, RowSumsAndUnlabeledSkipped) {
  Rng rng(4);
  auto g = oracle::random_connected_graph(40, 0.15, rng);
  std::vector<int> labels(40);
  for (auto& l : labels) l = static_cast<int>(uniform_index(rng, 4)) - 1;  // some -1
  auto A = neighbourhood_label_matrix(g, labels, abc(), 100.0);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_GE(A(i, j), 0.0);
      s += A(i, j);
    }
    if (A.support[i]) EXPECT_NEAR(s, 100.0, 1e-9);
  }
}

TEST(DiagonalDominance, StarRowsAndColumns) {
  NeighbourhoodLabelMatrix A{3, 1.0, {0.2, 0.5, 0.3,   //
                                      0.6, 0.3, 0.1,   // star column beats the diagonal
                                      0.5, 0.1, 0.4},
                             {1, 1, 1}};
  EXPECT_DOUBLE_EQ(diagonal_dominance(A), 0.0);
  EXPECT_DOUBLE_EQ(diagonal_dominance(A, {0}), 0.0);  // rows 1 and 2 still lose to the star column
  EXPECT_DOUBLE_EQ(diagonal_dominance(A, {0}, true), 1.0);
}

TEST(LabelDistribution, Examples) {
  std::vector<int> aab{0, 0, 1};
  EXPECT_EQ(label_distribution(aab), (std::vector<std::pair<int, std::size_t>>{{0, 2}, {1, 1}}));
  EXPECT_TRUE(label_distribution(std::vector<int>{}).empty());
  std::vector<int> same{2, 2, 2};
  EXPECT_EQ(label_distribution(same).size(), 1u);
}

TEST(DistinctLabels, Examples) {
  auto g = oracle::from_pairs(5, {{0, 1}, {0, 2}, {0, 3}});
  std::vector<int> labels{0, 1, 1, 2, 0};
  auto hist = distinct_labels_per_node(g, labels);
  EXPECT_EQ(hist[2], 1u);  // the center sees {b, c}
  EXPECT_EQ(hist[1], 3u);  // each leaf sees {a}
  EXPECT_EQ(hist[0], 1u);  // isolated node 4
  std::vector<int> mono(4, 0);
  auto k4 = distinct_labels_per_node(oracle::clique(4), mono);
  EXPECT_EQ(k4[1], 4u);
}

TEST(Synth, LimitCaseGivesDisjointTriangles) {
  SynthConfig cfg;
  cfg.groups = 2;
  cfg.leaves_per_group = 1;
  cfg.n = 6;
  cfg.sizes = ClassSizes::Uniform;
  cfg.p_same = 1.0;
  cfg.p_sibling = 0.0;
  cfg.p_far = 0.0;
  cfg.star_classes = 0;
  auto d = generate(cfg);
  EXPECT_EQ(d.graph.num_edges(), 6u);
  std::size_t k = 0;
  auto comp = connected_components(d.graph, &k);
  EXPECT_EQ(k, 2u);
  for (NodeId u = 0; u < 6; ++u) {
    EXPECT_EQ(d.graph.degree(u), 2u);
    for (NodeId v : d.graph.neighbors(u)) EXPECT_EQ(d.labels[u], d.labels[v]);
  }
}

TEST(Synth, GeometricSizes) {
  SynthConfig cfg;
  cfg.rho = 0.7;
  auto sizes = class_sizes(cfg);
  ASSERT_EQ(sizes.size(), 6u);
  const double expect = 1200.0 * 0.3 / (1.0 - std::pow(0.7, 6));
  EXPECT_LE(std::abs(static_cast<double>(sizes[0]) - expect), 1.0);
  EXPECT_TRUE(std::is_sorted(sizes.rbegin(), sizes.rend()));
  EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), 1200u);
}

TEST(Synth, DefaultSizes) {
  EXPECT_EQ(class_sizes(SynthConfig{}), (std::vector<std::size_t>{504, 302, 181, 109, 65, 39}));
}

TEST(Synth, InvalidConfigs) {
  SynthConfig bad;
  bad.p_far = 0.05;  // above p_sibling
  EXPECT_THROW(generate(bad), Error);
  SynthConfig tiny;
  tiny.n = 4;
  EXPECT_THROW(generate(tiny), Error);
  SynthConfig rho;
  rho.rho = 0.0;
  EXPECT_THROW(generate(rho), Error);
  SynthConfig sparse;
  sparse.strict = true;
  sparse.p_same = sparse.p_sibling = sparse.p_far = sparse.p_star = 0.0001;
  EXPECT_THROW(generate(sparse), Error);
}

TEST(Synth, DeterministicAndValid) {
  SynthConfig cfg;
  cfg.seed = 5;
  auto a = generate(cfg);
  auto b = generate(cfg);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.attributes, b.attributes);
  EXPECT_TRUE(a.graph.is_valid());
  cfg.seed = 6;
  EXPECT_NE(generate(cfg).graph, a.graph);
}

TEST(Synth, IntraClassDensityWithinThreeSigma) {
  SynthConfig cfg;
  cfg.n = 2000;
  cfg.seed = 1;
  auto d = generate(cfg);
  const auto sizes = class_sizes(cfg);
  std::vector<std::size_t> internal(sizes.size(), 0);
  for (auto [u, v] : d.graph.edges())
    if (d.labels[u] == d.labels[v]) ++internal[static_cast<std::size_t>(d.labels[u])];
  std::size_t pairs = 0, edges = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    pairs += sizes[c] * (sizes[c] - 1) / 2;
    edges += internal[c];
  }
  const double mean = cfg.p_same * static_cast<double>(pairs);
  const double sigma = std::sqrt(static_cast<double>(pairs) * cfg.p_same * (1 - cfg.p_same));
  EXPECT_LE(std::abs(static_cast<double>(edges) - mean), 3 * sigma);
}

TEST(Synth, LabelDistributionMonotone) {
  auto d = generate(SynthConfig{});
  auto dist = label_distribution(d.labels);
  for (std::size_t i = 1; i < dist.size(); ++i) EXPECT_LE(dist[i].second, dist[i - 1].second);
  EXPECT_EQ(dist.front().first, 0);
}

TEST(Synth, AttributeCorrelation) {
  SynthConfig cfg;
  cfg.n = 3000;
  auto d = generate(cfg);
  std::size_t agree = 0;
  for (NodeId u = 0; u < cfg.n; ++u) agree += d.attributes(u, static_cast<std::size_t>(d.labels[u]) / 3) == 1.0;
  const double rate = static_cast<double>(agree) / 3000.0;
  EXPECT_NEAR(rate, 0.8, 3 * std::sqrt(0.8 * 0.2 / 3000.0));
}

TEST(Homophily, MonochromaticCliques) {
  std::vector<Edge> e;
  oracle::clique(3, 0, &e);
  oracle::clique(3, 3, &e);
  auto g = Graph::from_edges(6, e);
  std::vector<int> labels{0, 0, 0, 3, 3, 3};
  auto [leaf, group] = empirical_homophily(g, labels, make_hierarchy({2, 3}));
  EXPECT_EQ(leaf, 1.0);
  EXPECT_EQ(group, 1.0);
}

TEST(Homophily, ShuffledLabelsNearOneOverK) {
  Rng rng(17);
  auto g = oracle::random_connected_graph(400, 0.03, rng);
  std::vector<int> labels(400);
  for (std::size_t i = 0; i < 400; ++i) labels[i] = static_cast<int>(i % 4);
  shuffle(labels.begin(), labels.end(), rng);
  auto [leaf, group] = empirical_homophily(g, labels, make_hierarchy({2, 2}));
  // A node's same-label fraction has variance about p(1-p)/deg.
  double var = 0.0;
  for (NodeId u = 0; u < 400; ++u) var += 0.25 * 0.75 / static_cast<double>(g.degree(u));
  const double sigma = std::sqrt(var) / 400.0;
  EXPECT_NEAR(leaf, 0.25, 3 * sigma);
}

TEST(Homophily, StarClassOnly) {
  // Center of class 0 with neighbours of classes 0, 1, 1: only the center and
  // the same-class leaf see labeled neighbours of their own class.
  auto g = oracle::from_pairs(4, {{0, 1}, {0, 2}, {0, 3}});
  std::vector<int> labels{0, 0, 1, 1};
  auto [leaf, group] = empirical_homophily(g, labels, make_hierarchy({2}));
  EXPECT_DOUBLE_EQ(leaf, (1.0 / 3.0 + 1.0 + 0.0 + 0.0) / 4.0);
}
