#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/metrics.hpp"
#include "hiersage/sage.hpp"
#include "hiersage/splitter.hpp"

namespace hiersage {

struct TrainConfig {
  std::size_t epochs = 30;
  std::size_t batch_size = 64;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  SampleFanout fanout;
  /// Sample the hops in reverse order (25 first, then 10 with the default).
  bool reverse_fanout = false;
  /// Hide the batch nodes' own labels from neighbour weighting, mirroring
  /// evaluation where the predicted node's label is unknown.
  bool hide_target_labels = true;
};

/// Non-finite loss during training.
class TrainingError : public Error {
 public:
  using Error::Error;
};

struct TrainResult {
  std::vector<double> epoch_loss;
};

inline SampleFanout effective_fanout(const TrainConfig& cfg, std::size_t layers) {
  SampleFanout f = cfg.fanout;
  if (f.sizes.size() < layers) throw Error("fanout lists fewer hops than the model has layers");
  f.sizes.resize(layers);
  if (cfg.reverse_fanout) std::reverse(f.sizes.begin(), f.sizes.end());
  return f;
}

/// Adam with bias correction.
template <typename Scalar>
class Adam {
 public:
  Adam(const SageParams<Scalar>& shape, const TrainConfig& cfg)
      : m_(shape.zeros_like()), v_(shape.zeros_like()), cfg_(cfg) {}

  void step(SageParams<Scalar>& params, SageParams<Scalar>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    auto pt = params.tensors();
    auto gt = grad.tensors();
    auto mt = m_.tensors();
    auto vt = v_.tensors();
    for (std::size_t i = 0; i < pt.size(); ++i) {
      for (std::size_t j = 0; j < pt[i].size(); ++j) {
        const double g = static_cast<double>(gt[i][j]) + cfg_.weight_decay * static_cast<double>(pt[i][j]);
        const double m = cfg_.beta1 * static_cast<double>(mt[i][j]) + (1.0 - cfg_.beta1) * g;
        const double v = cfg_.beta2 * static_cast<double>(vt[i][j]) + (1.0 - cfg_.beta2) * g * g;
        mt[i][j] = static_cast<Scalar>(m);
        vt[i][j] = static_cast<Scalar>(v);
        pt[i][j] -= static_cast<Scalar>(cfg_.lr * (m / c1) / (std::sqrt(v / c2) + cfg_.adam_eps));
      }
    }
  }

 private:
  SageParams<Scalar> m_, v_;
  TrainConfig cfg_;
  std::size_t t_ = 0;
};

namespace detail {

template <typename Scalar>
double grad_norm(SageParams<Scalar>& g) {
  double s = 0.0;
  for (auto t : g.tensors())
    for (Scalar x : t) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

}  // namespace detail

/// Mini-batch training on `graph` (normally g_tr on original ids). Every
/// node in `train_nodes` must be labeled. Returns the per-epoch mean loss
/// (sum of per-node losses over the epoch / node count).
template <typename Scalar>
TrainResult train(SageModel<Scalar>& model, const Graph& graph, const FeatureMatrix& features,
                  std::span<const int> labels, std::span<const NodeId> train_nodes, const LabelHierarchy& hierarchy,
                  const TrainConfig& cfg) {
  if (!(cfg.lr >= 0.0)) throw Error("learning rate must be non-negative");
  if (cfg.batch_size == 0) throw Error("batch size must be >= 1");
  if (features.rows() != graph.num_nodes() || labels.size() != graph.num_nodes())
    throw Error("features and labels need one row per graph node");
  for (NodeId u : train_nodes)
    if (labels[u] < 0 || static_cast<std::size_t>(labels[u]) >= model.num_classes())
      throw Error("training node " + std::to_string(u) + " is unlabeled");

  const auto F = detail::features_as<Scalar>(features);
  const WeightTable table(model.policy(), hierarchy);
  const SampleFanout fanout = effective_fanout(cfg, model.num_layers());
  Adam<Scalar> opt(model.params(), cfg);
  Rng order_rng(derive_seed(cfg.seed, "batches"));
  Rng sample_rng(derive_seed(cfg.seed, "sampling"));

  std::vector<NodeId> order(train_nodes.begin(), train_nodes.end());
  std::vector<int> weight_labels(labels.begin(), labels.end());
  ForwardPass<Scalar> pass;
  TrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), order_rng);
    double total = 0.0;
    for (std::size_t start = 0, batch_no = 0; start < order.size(); start += cfg.batch_size, ++batch_no) {
      std::span<const NodeId> batch(order.data() + start, std::min(cfg.batch_size, order.size() - start));
      std::vector<int> targets;
      for (NodeId u : batch) targets.push_back(labels[u]);
      if (cfg.hide_target_labels)
        for (NodeId u : batch) weight_labels[u] = -1;
      auto sample = sample_neighbourhood(graph, batch, fanout, sample_rng);
      forward(model, sample, F, weight_labels, table, pass);
      if (cfg.hide_target_labels)
        for (NodeId u : batch) weight_labels[u] = labels[u];
      const double loss = static_cast<double>(cross_entropy(pass, targets));
      auto grad = model.params().zeros_like();
      backward(model, sample, pass, targets, grad);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss at epoch " << epoch << ", batch " << batch_no << " (gradient norm "
            << detail::grad_norm(grad) << ")";
        throw TrainingError(msg.str());
      }
      total += loss * static_cast<double>(batch.size());
      opt.step(model.params(), grad);
    }
    result.epoch_loss.push_back(order.empty() ? 0.0 : total / static_cast<double>(order.size()));
  }
  return result;
}

/// Labels visible for neighbour weighting in a phase: training labels for
/// validation, training and validation labels for testing.
inline std::vector<int> visible_labels(std::span<const int> labels, const SplitAssignment& split, Role phase) {
  std::vector<int> out(labels.begin(), labels.end());
  for (NodeId u = 0; u < out.size(); ++u) {
    const Role r = split.role[u];
    const bool visible = r == Role::Train || (phase == Role::Test && r == Role::Val);
    if (!visible) out[u] = -1;
  }
  return out;
}

struct Evaluation {
  Metrics metrics;
  std::vector<int> predicted;
  std::vector<int> truth;
};

/// Argmax predictions for `eval_nodes` on `graph` (g_va or g_te). Their own
/// labels are always hidden from weighting.
template <typename Scalar>
Evaluation evaluate(const SageModel<Scalar>& model, const Graph& graph, const FeatureMatrix& features,
                    std::span<const int> labels, std::span<const int> weight_labels,
                    std::span<const NodeId> eval_nodes, const LabelHierarchy& hierarchy, const SampleFanout& fanout,
                    std::uint64_t seed, std::size_t batch_size = 256) {
  const auto F = detail::features_as<Scalar>(features);
  const WeightTable table(model.policy(), hierarchy);
  std::vector<int> wl(weight_labels.begin(), weight_labels.end());
  for (NodeId u : eval_nodes) wl[u] = -1;
  Rng rng(derive_seed(seed, "eval-sampling"));
  Evaluation ev;
  ForwardPass<Scalar> pass;
  for (std::size_t start = 0; start < eval_nodes.size(); start += batch_size) {
    std::span<const NodeId> batch(eval_nodes.data() + start, std::min(batch_size, eval_nodes.size() - start));
    auto sample = sample_neighbourhood(graph, batch, fanout, rng);
    forward(model, sample, F, wl, table, pass);
    auto pred = argmax_rows(pass.logits);
    ev.predicted.insert(ev.predicted.end(), pred.begin(), pred.end());
  }
  for (NodeId u : eval_nodes) {
    if (labels[u] < 0) throw Error("evaluation node " + std::to_string(u) + " is unlabeled");
    ev.truth.push_back(labels[u]);
  }
  ev.metrics = score_predictions(ev.predicted, ev.truth, model.num_classes());
  return ev;
}

/// Model + optimization settings for one experiment.
struct ExperimentConfig {
  std::string name;
  ModelConfig model;
  TrainConfig train;
};

/// Bundles a dataset with its split for training and evaluation.
struct SplitDataset {
  const Graph* graph = nullptr;
  const FeatureMatrix* features = nullptr;
  std::span<const int> labels;
  const LabelHierarchy* hierarchy = nullptr;
  const SplitAssignment* split = nullptr;
  const SplitGraphs* graphs = nullptr;
};

struct ExperimentResult {
  std::size_t index = 0;
  ExperimentConfig config;
  std::size_t parameters = 0;
  double val_micro_f1 = 0.0;
  std::optional<double> test_micro_f1;
  std::vector<double> epoch_loss;
  SageModel<double> model;
};

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const SplitDataset& data, bool with_test) {
  const auto& split = *data.split;
  const auto& sg = *data.graphs;
  SageModel<double> model(data.features->cols(), cfg.model, data.hierarchy->num_leaves(), cfg.train.seed);
  auto train_nodes = split.nodes(Role::Train);
  ExperimentResult r;
  r.config = cfg;
  r.epoch_loss = train(model, sg.g_tr, *data.features, data.labels, train_nodes, *data.hierarchy, cfg.train).epoch_loss;
  r.parameters = model.params().count();
  const auto fanout = effective_fanout(cfg.train, model.num_layers());
  const auto val_nodes = split.nodes(Role::Val);
  r.val_micro_f1 = evaluate(model, sg.g_va, *data.features, data.labels, visible_labels(data.labels, split, Role::Val),
                            val_nodes, *data.hierarchy, fanout, derive_seed(cfg.train.seed, "val"))
                       .metrics.micro_f1;
  if (with_test) {
    const auto test_nodes = split.nodes(Role::Test);
    r.test_micro_f1 = evaluate(model, sg.g_te, *data.features, data.labels, visible_labels(data.labels, split, Role::Test),
                               test_nodes, *data.hierarchy, fanout, derive_seed(cfg.train.seed, "test"))
                          .metrics.micro_f1;
  }
  r.model = std::move(model);
  return r;
}

struct GridSearchResult {
  std::size_t best = 0;  // index into leaderboard
  std::vector<ExperimentResult> leaderboard;  // ranked
};

/// Trains every grid entry, ranks by validation micro-F1 (ties: fewer
/// parameters, then lower grid index). The winner is evaluated on g_te; with
/// `test_all` every row is, for side-by-side reporting.
inline GridSearchResult grid_search(std::span<const ExperimentConfig> grid, const SplitDataset& data, bool test_all = false) {
  if (grid.empty()) throw Error("grid_search: empty grid");
  GridSearchResult out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto r = run_experiment(grid[i], data, test_all);
    r.index = i;
    out.leaderboard.push_back(std::move(r));
  }
  std::stable_sort(out.leaderboard.begin(), out.leaderboard.end(), [](const auto& a, const auto& b) {
    if (a.val_micro_f1 != b.val_micro_f1) return a.val_micro_f1 > b.val_micro_f1;
    if (a.parameters != b.parameters) return a.parameters < b.parameters;
    return a.index < b.index;
  });
  auto& winner = out.leaderboard.front();
  if (!winner.test_micro_f1) {
    const auto& split = *data.split;
    const auto fanout = effective_fanout(winner.config.train, winner.model.num_layers());
    const auto test_nodes = split.nodes(Role::Test);
    winner.test_micro_f1 = evaluate(winner.model, data.graphs->g_te, *data.features, data.labels,
                                    visible_labels(data.labels, split, Role::Test), test_nodes, *data.hierarchy, fanout,
                                    derive_seed(winner.config.train.seed, "test"))
                               .metrics.micro_f1;
  }
  return out;
}

}  // namespace hiersage
