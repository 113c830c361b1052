#pragma once

// JSON forms of configs, checkpoints and metrics (nlohmann/json).

#include <json.hpp>

#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/metrics.hpp"
#include "hiersage/sage.hpp"
#include "hiersage/train.hpp"

namespace hiersage {

using Json = nlohmann::json;

inline constexpr int kCheckpointVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

inline const char* to_string(LcaDistance d) {
  switch (d) {
    case LcaDistance::Center: return "center";
    case LcaDistance::Neighbour: return "neighbour";
    case LcaDistance::Max: return "max";
    case LcaDistance::Sum: return "sum";
  }
  return "?";
}

inline LcaDistance lca_distance_from_string(const std::string& s) {
  if (s == "center") return LcaDistance::Center;
  if (s == "neighbour" || s == "neighbor") return LcaDistance::Neighbour;
  if (s == "max") return LcaDistance::Max;
  if (s == "sum") return LcaDistance::Sum;
  throw Error("unknown lca distance mode '" + s + "'");
}

inline Json to_json(const ExperimentConfig& c) {
  return Json{{"name", c.name},
              {"hidden", c.model.hidden},
              {"aggregator", to_string(c.model.policy.kind)},
              {"unknown_label_weight", c.model.policy.unknown_label_weight},
              {"lca_distance", to_string(c.model.policy.lca_distance)},
              {"epochs", c.train.epochs},
              {"batch_size", c.train.batch_size},
              {"lr", c.train.lr},
              {"beta1", c.train.beta1},
              {"beta2", c.train.beta2},
              {"weight_decay", c.train.weight_decay},
              {"fanout", c.train.fanout.sizes},
              {"reverse_fanout", c.train.reverse_fanout},
              {"hide_target_labels", c.train.hide_target_labels},
              {"seed", c.train.seed}};
}

/// Missing keys keep the values already in `base`.
inline ExperimentConfig experiment_from_json(const Json& j, ExperimentConfig base = {}) {
  if (!j.is_object()) throw Error("experiment config must be a JSON object");
  static const std::vector<std::string> known{"name", "hidden", "aggregator", "unknown_label_weight", "lca_distance",
                                              "epochs", "batch_size", "lr", "beta1", "beta2", "weight_decay", "fanout",
                                              "reverse_fanout", "hide_target_labels", "seed"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) throw Error("unknown config key '" + it.key() + "'");
  try {
    if (j.contains("name")) base.name = j["name"].get<std::string>();
    if (j.contains("hidden")) base.model.hidden = j["hidden"].get<std::vector<std::size_t>>();
    if (j.contains("aggregator")) base.model.policy.kind = weight_kind_from_string(j["aggregator"].get<std::string>());
    if (j.contains("unknown_label_weight")) base.model.policy.unknown_label_weight = j["unknown_label_weight"].get<double>();
    if (j.contains("lca_distance")) base.model.policy.lca_distance = lca_distance_from_string(j["lca_distance"].get<std::string>());
    if (j.contains("epochs")) base.train.epochs = j["epochs"].get<std::size_t>();
    if (j.contains("batch_size")) base.train.batch_size = j["batch_size"].get<std::size_t>();
    if (j.contains("lr")) base.train.lr = j["lr"].get<double>();
    if (j.contains("beta1")) base.train.beta1 = j["beta1"].get<double>();
    if (j.contains("beta2")) base.train.beta2 = j["beta2"].get<double>();
    if (j.contains("weight_decay")) base.train.weight_decay = j["weight_decay"].get<double>();
    if (j.contains("fanout")) base.train.fanout.sizes = j["fanout"].get<std::vector<std::size_t>>();
    if (j.contains("reverse_fanout")) base.train.reverse_fanout = j["reverse_fanout"].get<bool>();
    if (j.contains("hide_target_labels")) base.train.hide_target_labels = j["hide_target_labels"].get<bool>();
    if (j.contains("seed")) base.train.seed = j["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad experiment config: ") + e.what());
  }
  if (!(base.train.lr >= 0.0)) throw Error("learning rate must be non-negative");
  return base;
}

inline Json matrix_to_json(const RowMatrix<double>& m) {
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

inline RowMatrix<double> matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw Error("checkpoint matrix has wrong element count");
  RowMatrix<double> m(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
  return m;
}

inline RowVector<double> vector_from_json(const Json& j) {
  const auto data = j.get<std::vector<double>>();
  RowVector<double> v(static_cast<Eigen::Index>(data.size()));
  std::copy(data.begin(), data.end(), v.data());
  return v;
}

/// Versioned checkpoint: dims, aggregator, weight policy, sampling settings,
/// feature column names and row-major tensors.
inline Json checkpoint_to_json(const SageModel<double>& model, const TrainConfig& train,
                               const std::vector<std::string>& feature_columns) {
  const auto& p = model.params();
  Json layers = Json::array();
  for (std::size_t k = 0; k < p.W.size(); ++k)
    layers.push_back(Json{{"weights", matrix_to_json(p.W[k])},
                          {"bias", std::vector<double>(p.b[k].data(), p.b[k].data() + p.b[k].size())}});
  return Json{{"format", "hiersage-checkpoint"},
              {"version", kCheckpointVersion},
              {"input_dim", model.input_dim()},
              {"num_classes", model.num_classes()},
              {"hidden", model.config().hidden},
              {"aggregator", to_string(model.policy().kind)},
              {"unknown_label_weight", model.policy().unknown_label_weight},
              {"lca_distance", to_string(model.policy().lca_distance)},
              {"fanout", train.fanout.sizes},
              {"reverse_fanout", train.reverse_fanout},
              {"seed", train.seed},
              {"feature_columns", feature_columns},
              {"layers", layers},
              {"head", Json{{"weights", matrix_to_json(p.W_out)},
                            {"bias", std::vector<double>(p.b_out.data(), p.b_out.data() + p.b_out.size())}}}};
}

struct Checkpoint {
  SageModel<double> model;
  TrainConfig train;
  std::vector<std::string> feature_columns;
};

inline Checkpoint checkpoint_from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != "hiersage-checkpoint") throw Error("not a hiersage checkpoint");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion) throw Error("unsupported checkpoint version " + std::to_string(version));
    ModelConfig mc;
    mc.hidden = j.at("hidden").get<std::vector<std::size_t>>();
    mc.policy.kind = weight_kind_from_string(j.at("aggregator").get<std::string>());
    mc.policy.unknown_label_weight = j.at("unknown_label_weight").get<double>();
    mc.policy.lca_distance = lca_distance_from_string(j.at("lca_distance").get<std::string>());
    SageParams<double> p;
    for (const auto& layer : j.at("layers")) {
      p.W.push_back(matrix_from_json(layer.at("weights")));
      p.b.push_back(vector_from_json(layer.at("bias")));
    }
    p.W_out = matrix_from_json(j.at("head").at("weights"));
    p.b_out = vector_from_json(j.at("head").at("bias"));
    Checkpoint c;
    c.model = SageModel<double>::from_params(j.at("input_dim").get<std::size_t>(), mc, j.at("num_classes").get<std::size_t>(),
                                             std::move(p));
    c.train.fanout.sizes = j.at("fanout").get<std::vector<std::size_t>>();
    c.train.reverse_fanout = j.at("reverse_fanout").get<bool>();
    c.train.seed = j.at("seed").get<std::uint64_t>();
    c.feature_columns = j.at("feature_columns").get<std::vector<std::string>>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
}

/// {micro_f1, macro_f1, correct, total, per_class: {name: {...}}, confusion: [[...]]}
template <typename ClassName>
Json metrics_to_json(const Metrics& m, ClassName&& class_name) {
  Json per_class = Json::object();
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto& s = m.per_class[c];
    per_class[class_name(static_cast<int>(c))] =
        Json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"support", s.support}};
  }
  return Json{{"micro_f1", m.micro_f1}, {"macro_f1", m.macro_f1}, {"correct", m.correct}, {"total", m.total},
              {"per_class", per_class}, {"confusion", m.confusion}};
}

}  // namespace hiersage
