#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hiersage/centrality.hpp"
#include "hiersage/community.hpp"
#include "hiersage/embed.hpp"
#include "hiersage/feature_matrix.hpp"
#include "hiersage/splitter.hpp"
#include "hiersage/synthgen.hpp"
#include "hiersage/train.hpp"

namespace hiersage {

/// Which hand-crafted descriptors to compute.
struct DescriptorOptions {
  bool degree = true;
  bool assortativity = true;
  bool betweenness = true;
  bool louvain = true;
  std::size_t max_communities = 16;
  /// Run Louvain on the full graph instead of the training subgraph.
  bool louvain_full_graph = false;
  bool normalized_betweenness = false;
  /// 0 = exact; otherwise pivot sources (only used when n exceeds
  /// `approx_threshold`).
  std::size_t betweenness_pivots = 0;
  std::size_t approx_threshold = 50000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// Descriptor columns for every node of `g`. Louvain runs on the training
/// subgraph when `train` is given (and not in full-graph mode); remaining
/// nodes join the majority community of their assigned neighbours.
inline FeatureMatrix graph_descriptors(const Graph& g, const DescriptorOptions& opt, const Subgraph* train = nullptr) {
  std::vector<FeatureMatrix> parts;
  if (opt.degree) parts.push_back(FeatureMatrix::column("degree", degree_vector(g)));
  if (opt.assortativity) parts.push_back(FeatureMatrix::column("assortativity", assortativity(g)));
  if (opt.betweenness) {
    BetweennessOptions bo;
    bo.normalized = opt.normalized_betweenness;
    bo.jobs = opt.jobs;
    bo.seed = opt.seed;
    if (g.num_nodes() > opt.approx_threshold) bo.pivots = opt.betweenness_pivots ? opt.betweenness_pivots : 1000;
    else bo.pivots = opt.betweenness_pivots;
    parts.push_back(FeatureMatrix::column("betweenness", betweenness(g, bo)));
  }
  if (opt.louvain) {
    Partition p;
    if (train && !opt.louvain_full_graph)
      p = extend_partition(g, *train, louvain(train->graph, opt.seed));
    else
      p = louvain(g, opt.seed);
    parts.push_back(one_hot_communities(p, opt.max_communities));
  }
  if (parts.empty()) throw Error("no descriptor selected");
  return assemble_features(std::span<const FeatureMatrix>(parts), false);
}

struct EmbedOptions {
  std::size_t walk_length = 40;
  std::size_t walks_per_node = 10;
  SkipGramConfig skipgram;
  unsigned jobs = 1;
};

/// Node embeddings for all rows of the full graph. When trained on a
/// subgraph, each node outside it gets the mean embedding of its neighbours
/// inside it (zero if it has none).
inline FeatureMatrix node_embeddings(const Graph& full, const EmbedOptions& opt, const Subgraph* train = nullptr) {
  const Graph& g = train ? train->graph : full;
  auto corpus = random_walks(g, opt.walk_length, opt.walks_per_node, opt.skipgram.seed, opt.jobs);
  auto emb = train_skipgram(corpus, opt.skipgram);
  std::vector<std::string> names;
  for (std::size_t k = 0; k < emb.dim; ++k) names.push_back("emb_" + std::to_string(k));
  FeatureMatrix m(full.num_nodes(), std::move(names));
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    const NodeId row = train ? train->new_to_old[u] : u;
    for (std::size_t k = 0; k < emb.dim; ++k) m(row, k) = emb.values[u * emb.dim + k];
  }
  if (!train) return m;
  for (NodeId u = 0; u < full.num_nodes(); ++u) {
    if (train->old_to_new[u] != Subgraph::kAbsent) continue;
    std::size_t inside = 0;
    for (NodeId v : full.neighbors(u)) {
      const NodeId tv = train->old_to_new[v];
      if (tv == Subgraph::kAbsent) continue;
      ++inside;
      for (std::size_t k = 0; k < emb.dim; ++k) m(u, k) += emb.values[tv * emb.dim + k];
    }
    if (inside)
      for (std::size_t k = 0; k < emb.dim; ++k) m(u, k) /= static_cast<double>(inside);
  }
  return m;
}

/// End-to-end aggregator comparison on a synthetic dataset.
struct BenchConfig {
  std::uint64_t seed = 7;
  SynthConfig synth;
  DescriptorOptions descriptors;
  bool use_embeddings = true;
  bool embed_full_graph = false;
  EmbedOptions embed;
  std::vector<std::size_t> hidden{64, 64};
  TrainConfig train;
  std::size_t max_split_retries = 1000;
  std::vector<WeightKind> aggregators{WeightKind::Uniform, WeightKind::Wmean1, WeightKind::Wmean2};
  unsigned jobs = 1;
};

struct BenchRow {
  std::string aggregator;
  double val_micro_f1 = 0.0;
  double test_micro_f1 = 0.0;
  std::vector<double> epoch_loss;
};

struct BenchResult {
  std::size_t nodes = 0;  // after restricting to the largest component
  std::size_t edges = 0;
  std::size_t feature_dim = 0;
  SplitReport split_report;
  std::vector<BenchRow> rows;
};

/// Prepared data shared by all aggregator runs of one bench seed.
struct PreparedDataset {
  Graph graph;
  std::vector<int> labels;
  LabelHierarchy hierarchy;
  std::vector<int> star_classes;
  FeatureMatrix features;
  SplitAssignment split;
  SplitGraphs graphs;
  SplitReport report;
};

inline PreparedDataset prepare_synthetic(const BenchConfig& cfg) {
  SynthConfig sc = cfg.synth;
  sc.seed = derive_seed(cfg.seed, "synth");
  auto data = generate(sc);
  auto lcc = largest_connected_component(data.graph);

  PreparedDataset p;
  p.graph = std::move(lcc.graph);
  p.hierarchy = data.hierarchy;
  p.star_classes = data.star_classes;
  std::vector<std::string> attr_cols = data.attributes.columns();
  FeatureMatrix attributes(p.graph.num_nodes(), attr_cols);
  for (std::size_t c = 0; c < attr_cols.size(); ++c) attributes.set_one_hot(c);
  for (NodeId u = 0; u < p.graph.num_nodes(); ++u) {
    const NodeId old = lcc.new_to_old[u];
    p.labels.push_back(data.labels[old]);
    for (std::size_t c = 0; c < attr_cols.size(); ++c) attributes(u, c) = data.attributes(old, c);
  }

  SplitOptions so;
  so.seed = derive_seed(cfg.seed, "split-stream");
  so.max_retries = cfg.max_split_retries;
  p.split = make_split(p.graph, so, &p.report);
  p.graphs = build_split_graphs(p.graph, p.split);

  std::vector<FeatureMatrix> parts{attributes};
  DescriptorOptions dopt = cfg.descriptors;
  dopt.seed = derive_seed(cfg.seed, "louvain");
  dopt.jobs = cfg.jobs;
  parts.push_back(graph_descriptors(p.graph, dopt, &p.graphs.train));
  if (cfg.use_embeddings) {
    EmbedOptions eo = cfg.embed;
    eo.skipgram.seed = derive_seed(cfg.seed, "walks");
    eo.jobs = cfg.jobs;
    parts.push_back(node_embeddings(p.graph, eo, cfg.embed_full_graph ? nullptr : &p.graphs.train));
  }
  const auto train_nodes = p.split.nodes(Role::Train);
  p.features = assemble_features(std::span<const FeatureMatrix>(parts), true, train_nodes);
  return p;
}

inline BenchResult run_bench(const BenchConfig& cfg) {
  auto p = prepare_synthetic(cfg);
  BenchResult out;
  out.nodes = p.graph.num_nodes();
  out.edges = p.graph.num_edges();
  out.feature_dim = p.features.cols();
  out.split_report = p.report;
  SplitDataset data{&p.graph, &p.features, p.labels, &p.hierarchy, &p.split, &p.graphs};
  for (WeightKind kind : cfg.aggregators) {
    ExperimentConfig ec;
    ec.name = to_string(kind);
    ec.model.hidden = cfg.hidden;
    ec.model.policy.kind = kind;
    ec.train = cfg.train;
    ec.train.seed = derive_seed(cfg.seed, "train");
    auto r = run_experiment(ec, data, true);
    out.rows.push_back({ec.name, r.val_micro_f1, r.test_micro_f1.value_or(0.0), r.epoch_loss});
  }
  return out;
}

}  // namespace hiersage
