#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/feature_matrix.hpp"
#include "hiersage/graph.hpp"
#include "hiersage/hierarchy.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

// ---------------------------------------------------------------------------
// Neighbourhood sampling

/// Per-hop sample sizes, first hop first. Default 10 then 25.
struct SampleFanout {
  std::vector<std::size_t> sizes{10, 25};
};

/// Sampled computation tree. levels[0] is the batch; node i of level l owns
/// children [i*fanout[l], (i+1)*fanout[l]) of level l+1.
struct NeighbourhoodSample {
  std::vector<std::vector<NodeId>> levels;
  std::vector<std::size_t> fanout;

  std::size_t depth() const noexcept { return fanout.size(); }
};

/// Uniform sampling of exactly fanout[k] neighbours per frontier node: without
/// replacement when the degree allows it, with replacement otherwise.
/// Isolated nodes point back at themselves.
inline NeighbourhoodSample sample_neighbourhood(const Graph& g, std::span<const NodeId> batch,
                                                const SampleFanout& fanout, Rng& rng) {
  NeighbourhoodSample s;
  s.fanout = fanout.sizes;
  s.levels.emplace_back(batch.begin(), batch.end());
  std::vector<std::size_t> pick;
  for (std::size_t hop = 0; hop < fanout.sizes.size(); ++hop) {
    const std::size_t k = fanout.sizes[hop];
    if (k == 0) throw Error("fanout sizes must be >= 1");
    const auto& frontier = s.levels.back();
    std::vector<NodeId> next;
    next.reserve(frontier.size() * k);
    for (NodeId u : frontier) {
      auto nb = g.neighbors(u);
      if (nb.empty()) {
        next.insert(next.end(), k, u);
      } else if (nb.size() < k) {
        for (std::size_t j = 0; j < k; ++j) next.push_back(nb[uniform_index(rng, nb.size())]);
      } else {
        // Partial Fisher-Yates over indices.
        pick.resize(nb.size());
        for (std::size_t j = 0; j < nb.size(); ++j) pick[j] = j;
        for (std::size_t j = 0; j < k; ++j) {
          const auto r = j + uniform_index(rng, nb.size() - j);
          std::swap(pick[j], pick[r]);
          next.push_back(nb[pick[j]]);
        }
      }
    }
    s.levels.push_back(std::move(next));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Weighted mean over {center (weight center_weight)} ∪ {neighbours}:
/// (c·h_v + Σ w_u h_u) / (c + Σ w_u). All weights 1 gives the plain mean.
inline std::vector<double> aggregate(std::span<const double> center, std::span<const std::vector<double>> nbrs,
                                     std::span<const double> weights, double center_weight = 1.0) {
  if (weights.size() != nbrs.size()) throw Error("aggregate: one weight per neighbour required");
  if (!(center_weight > 0.0)) throw Error("aggregate: center weight must be positive");
  std::vector<double> out(center.begin(), center.end());
  for (auto& x : out) x *= center_weight;
  double denom = center_weight;
  for (std::size_t j = 0; j < nbrs.size(); ++j) {
    if (nbrs[j].size() != center.size()) throw Error("aggregate: dimension mismatch");
    if (!(weights[j] > 0.0)) throw Error("aggregate: weights must be positive");
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights[j] * nbrs[j][k];
    denom += weights[j];
  }
  for (auto& x : out) x /= denom;
  return out;
}

// ---------------------------------------------------------------------------
// Model

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Weights of every layer plus the classification head. Also used for
/// gradients and optimizer moments.
template <typename Scalar>
struct SageParams {
  std::vector<RowMatrix<Scalar>> W;  // layer k: out × in
  std::vector<RowVector<Scalar>> b;
  RowMatrix<Scalar> W_out;           // classes × last hidden
  RowVector<Scalar> b_out;

  SageParams zeros_like() const {
    SageParams z;
    for (const auto& w : W) z.W.push_back(RowMatrix<Scalar>::Zero(w.rows(), w.cols()));
    for (const auto& v : b) z.b.push_back(RowVector<Scalar>::Zero(v.cols()));
    z.W_out = RowMatrix<Scalar>::Zero(W_out.rows(), W_out.cols());
    z.b_out = RowVector<Scalar>::Zero(b_out.cols());
    return z;
  }

  /// Applies f(param, other) to every tensor pair as flat arrays.
  template <typename F>
  void zip(SageParams& other, F&& f) {
    for (std::size_t k = 0; k < W.size(); ++k) {
      f(W[k].data(), other.W[k].data(), static_cast<std::size_t>(W[k].size()));
      f(b[k].data(), other.b[k].data(), static_cast<std::size_t>(b[k].size()));
    }
    f(W_out.data(), other.W_out.data(), static_cast<std::size_t>(W_out.size()));
    f(b_out.data(), other.b_out.data(), static_cast<std::size_t>(b_out.size()));
  }

  /// Flat views of every tensor, layers first then head.
  std::vector<std::span<Scalar>> tensors() {
    std::vector<std::span<Scalar>> t;
    for (std::size_t k = 0; k < W.size(); ++k) {
      t.emplace_back(W[k].data(), static_cast<std::size_t>(W[k].size()));
      t.emplace_back(b[k].data(), static_cast<std::size_t>(b[k].size()));
    }
    t.emplace_back(W_out.data(), static_cast<std::size_t>(W_out.size()));
    t.emplace_back(b_out.data(), static_cast<std::size_t>(b_out.size()));
    return t;
  }

  std::size_t count() const {
    std::size_t c = static_cast<std::size_t>(W_out.size() + b_out.size());
    for (std::size_t k = 0; k < W.size(); ++k) c += static_cast<std::size_t>(W[k].size() + b[k].size());
    return c;
  }
};

struct ModelConfig {
  std::vector<std::size_t> hidden{128, 128};
  WeightPolicy policy;
};

/// Stacked weighted-mean GraphSAGE layers (aggregate, affine, ReLU, L2
/// normalize) followed by a linear softmax head.
template <typename Scalar = double>
class SageModel {
 public:
  SageModel() = default;

  /// Glorot-uniform weights, zero biases.
  SageModel(std::size_t input_dim, const ModelConfig& cfg, std::size_t num_classes, std::uint64_t seed)
      : input_dim_(input_dim), config_(cfg), num_classes_(num_classes) {
    if (cfg.hidden.empty()) throw Error("a model needs at least one layer");
    if (input_dim == 0 || num_classes == 0) throw Error("input and class dimensions must be positive");
    Rng rng(derive_seed(seed, "init"));
    auto glorot = [&](std::size_t out, std::size_t in) {
      RowMatrix<Scalar> m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
      const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<Scalar>(uniform_real(rng, -limit, limit));
      return m;
    };
    std::size_t in = input_dim;
    for (std::size_t h : cfg.hidden) {
      if (h == 0) throw Error("hidden dimensions must be positive");
      params_.W.push_back(glorot(h, in));
      params_.b.push_back(RowVector<Scalar>::Zero(static_cast<Eigen::Index>(h)));
      in = h;
    }
    params_.W_out = glorot(num_classes, in);
    params_.b_out = RowVector<Scalar>::Zero(static_cast<Eigen::Index>(num_classes));
  }

  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t num_layers() const noexcept { return config_.hidden.size(); }
  std::size_t num_classes() const noexcept { return num_classes_; }
  const ModelConfig& config() const noexcept { return config_; }
  const WeightPolicy& policy() const noexcept { return config_.policy; }
  SageParams<Scalar>& params() noexcept { return params_; }
  const SageParams<Scalar>& params() const noexcept { return params_; }

  template <typename Other>
  SageModel<Other> cast() const {
    SageModel<Other> m;
    m.input_dim_ = input_dim_;
    m.config_ = config_;
    m.num_classes_ = num_classes_;
    for (const auto& w : params_.W) m.params_.W.push_back(w.template cast<Other>());
    for (const auto& v : params_.b) m.params_.b.push_back(v.template cast<Other>());
    m.params_.W_out = params_.W_out.template cast<Other>();
    m.params_.b_out = params_.b_out.template cast<Other>();
    return m;
  }

  /// Rebuilds a model from explicit tensors (checkpoints, tests).
  static SageModel from_params(std::size_t input_dim, const ModelConfig& cfg, std::size_t num_classes,
                               SageParams<Scalar> p) {
    SageModel m;
    m.input_dim_ = input_dim;
    m.config_ = cfg;
    m.num_classes_ = num_classes;
    if (p.W.size() != cfg.hidden.size() || p.b.size() != cfg.hidden.size()) throw Error("layer count mismatch");
    std::size_t in = input_dim;
    for (std::size_t k = 0; k < p.W.size(); ++k) {
      if (static_cast<std::size_t>(p.W[k].rows()) != cfg.hidden[k] || static_cast<std::size_t>(p.W[k].cols()) != in ||
          static_cast<std::size_t>(p.b[k].cols()) != cfg.hidden[k])
        throw Error("layer " + std::to_string(k) + " has inconsistent dimensions");
      in = cfg.hidden[k];
    }
    if (static_cast<std::size_t>(p.W_out.rows()) != num_classes || static_cast<std::size_t>(p.W_out.cols()) != in ||
        static_cast<std::size_t>(p.b_out.cols()) != num_classes)
      throw Error("head has inconsistent dimensions");
    m.params_ = std::move(p);
    return m;
  }

 private:
  template <typename>
  friend class SageModel;

  std::size_t input_dim_ = 0;
  ModelConfig config_;
  std::size_t num_classes_ = 0;
  SageParams<Scalar> params_;
};

/// Everything forward() produces that backward() needs.
template <typename Scalar>
struct ForwardPass {
  // weights[l][i*s + j]: weight of child j in node i's aggregate at level l.
  std::vector<std::vector<Scalar>> weights;
  std::vector<std::vector<Scalar>> denom;
  // Indexed [k][l] for layer k = 1..K (slot 0 unused) and level l = 0..K-k.
  std::vector<std::vector<RowMatrix<Scalar>>> agg, pre, hidden;
  std::vector<std::vector<std::vector<Scalar>>> norms;
  RowMatrix<Scalar> logits;
  RowMatrix<Scalar> probs;
};

namespace detail {

template <typename Scalar>
RowMatrix<Scalar> features_as(const FeatureMatrix& f) {
  RowMatrix<Scalar> m(static_cast<Eigen::Index>(f.rows()), static_cast<Eigen::Index>(f.cols()));
  for (std::size_t r = 0; r < f.rows(); ++r)
    for (std::size_t c = 0; c < f.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = static_cast<Scalar>(f(r, c));
  return m;
}

}  // namespace detail

/// Forward pass over a sampled tree. `features` holds one row per graph node;
/// `weight_labels[u]` is the label used for neighbour weighting (negative =
/// unknown). Returns per-batch-node logits in `pass.logits`.
template <typename Scalar>
void forward(const SageModel<Scalar>& model, const NeighbourhoodSample& sample, const RowMatrix<Scalar>& features,
             std::span<const int> weight_labels, const WeightTable& weights, ForwardPass<Scalar>& pass) {
  const std::size_t K = model.num_layers();
  if (sample.depth() < K) throw Error("sample has fewer hops than the model has layers");
  if (static_cast<std::size_t>(features.cols()) != model.input_dim())
    throw Error("feature dimension " + std::to_string(features.cols()) + " does not match model input " +
                std::to_string(model.input_dim()));
  const auto& P = model.params();

  pass.weights.assign(K, {});
  pass.denom.assign(K, {});
  for (std::size_t l = 0; l < K; ++l) {
    const auto& parents = sample.levels[l];
    const auto& kids = sample.levels[l + 1];
    const std::size_t s = sample.fanout[l];
    auto& w = pass.weights[l];
    auto& d = pass.denom[l];
    w.resize(kids.size());
    d.resize(parents.size());
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const int lc = parents[i] < weight_labels.size() ? weight_labels[parents[i]] : -1;
      double sum = 1.0;
      for (std::size_t j = 0; j < s; ++j) {
        const NodeId c = kids[i * s + j];
        const double wij = weights(lc, c < weight_labels.size() ? weight_labels[c] : -1);
        w[i * s + j] = static_cast<Scalar>(wij);
        sum += wij;
      }
      d[i] = static_cast<Scalar>(sum);
    }
  }

  pass.agg.assign(K + 1, {});
  pass.pre.assign(K + 1, {});
  pass.hidden.assign(K + 1, {});
  pass.norms.assign(K + 1, {});
  for (std::size_t k = 1; k <= K; ++k) {
    const auto& W = P.W[k - 1];
    const auto& b = P.b[k - 1];
    const auto in_dim = W.cols();
    for (std::size_t l = 0; l + k <= K; ++l) {
      const auto& parents = sample.levels[l];
      const std::size_t s = sample.fanout[l];
      RowMatrix<Scalar> A(static_cast<Eigen::Index>(parents.size()), in_dim);
      for (std::size_t i = 0; i < parents.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        if (k == 1)
          A.row(ii) = features.row(parents[i]);
        else
          A.row(ii) = pass.hidden[k - 1][l].row(ii);
        for (std::size_t j = 0; j < s; ++j) {
          const std::size_t c = i * s + j;
          const Scalar wc = pass.weights[l][c];
          if (k == 1)
            A.row(ii) += wc * features.row(sample.levels[l + 1][c]);
          else
            A.row(ii) += wc * pass.hidden[k - 1][l + 1].row(static_cast<Eigen::Index>(c));
        }
        A.row(ii) /= pass.denom[l][i];
      }
      RowMatrix<Scalar> Z = A * W.transpose();
      Z.rowwise() += b;
      RowMatrix<Scalar> H = Z.cwiseMax(Scalar(0));
      std::vector<Scalar> norms(parents.size());
      for (Eigen::Index i = 0; i < H.rows(); ++i) {
        const Scalar r = H.row(i).norm();
        norms[static_cast<std::size_t>(i)] = r;
        if (r > Scalar(0)) H.row(i) /= r;
      }
      pass.agg[k].push_back(std::move(A));
      pass.pre[k].push_back(std::move(Z));
      pass.hidden[k].push_back(std::move(H));
      pass.norms[k].push_back(std::move(norms));
    }
  }
  pass.logits = pass.hidden[K][0] * P.W_out.transpose();
  pass.logits.rowwise() += P.b_out;
  pass.probs.resize(pass.logits.rows(), pass.logits.cols());
  for (Eigen::Index i = 0; i < pass.logits.rows(); ++i) {
    const Scalar mx = pass.logits.row(i).maxCoeff();
    auto e = (pass.logits.row(i).array() - mx).exp();
    pass.probs.row(i) = e / e.sum();
  }
}

/// Mean cross-entropy of the batch against `targets` (one per batch node).
template <typename Scalar>
Scalar cross_entropy(const ForwardPass<Scalar>& pass, std::span<const int> targets) {
  if (static_cast<std::size_t>(pass.logits.rows()) != targets.size()) throw Error("one target per batch node required");
  Scalar loss = 0;
  for (Eigen::Index i = 0; i < pass.logits.rows(); ++i) {
    const int t = targets[static_cast<std::size_t>(i)];
    if (t < 0 || t >= pass.logits.cols()) throw Error("target class out of range");
    const Scalar mx = pass.logits.row(i).maxCoeff();
    const Scalar lse = mx + std::log((pass.logits.row(i).array() - mx).exp().sum());
    loss += lse - pass.logits(i, t);
  }
  return loss / static_cast<Scalar>(targets.size());
}

/// Gradient of cross_entropy with respect to every parameter, accumulated
/// into `grad` (which must be shaped like the model's params).
template <typename Scalar>
void backward(const SageModel<Scalar>& model, const NeighbourhoodSample& sample, const ForwardPass<Scalar>& pass,
              std::span<const int> targets, SageParams<Scalar>& grad) {
  const std::size_t K = model.num_layers();
  const auto& P = model.params();
  const auto B = pass.probs.rows();
  RowMatrix<Scalar> dlogits = pass.probs;
  for (Eigen::Index i = 0; i < B; ++i) dlogits(i, targets[static_cast<std::size_t>(i)]) -= Scalar(1);
  dlogits /= static_cast<Scalar>(B);

  grad.W_out.noalias() += dlogits.transpose() * pass.hidden[K][0];
  grad.b_out += dlogits.colwise().sum();

  // dH[l] holds the gradient w.r.t. hidden[k][l] for the current layer k.
  std::vector<RowMatrix<Scalar>> dH(1);
  dH[0] = dlogits * P.W_out;
  for (std::size_t k = K; k >= 1; --k) {
    const auto& W = P.W[k - 1];
    std::vector<RowMatrix<Scalar>> dPrev;
    if (k > 1) {
      dPrev.resize(K - k + 2);
      for (std::size_t l = 0; l < dPrev.size(); ++l)
        dPrev[l] = RowMatrix<Scalar>::Zero(pass.hidden[k - 1][l].rows(), pass.hidden[k - 1][l].cols());
    }
    for (std::size_t l = 0; l + k <= K; ++l) {
      const auto& H = pass.hidden[k][l];
      const auto& Z = pass.pre[k][l];
      const auto& norms = pass.norms[k][l];
      RowMatrix<Scalar> dZ(H.rows(), H.cols());
      for (Eigen::Index i = 0; i < H.rows(); ++i) {
        const Scalar r = norms[static_cast<std::size_t>(i)];
        if (r > Scalar(0)) {
          const Scalar proj = H.row(i).dot(dH[l].row(i));
          dZ.row(i) = (dH[l].row(i) - proj * H.row(i)) / r;
        } else {
          dZ.row(i).setZero();
        }
        for (Eigen::Index c = 0; c < H.cols(); ++c)
          if (Z(i, c) <= Scalar(0)) dZ(i, c) = Scalar(0);
      }
      grad.W[k - 1].noalias() += dZ.transpose() * pass.agg[k][l];
      grad.b[k - 1] += dZ.colwise().sum();
      if (k == 1) continue;
      RowMatrix<Scalar> dA = dZ * W;
      const std::size_t s = sample.fanout[l];
      for (Eigen::Index i = 0; i < dA.rows(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        dA.row(i) /= pass.denom[l][iu];
        dPrev[l].row(i) += dA.row(i);
        for (std::size_t j = 0; j < s; ++j) {
          const std::size_t c = iu * s + j;
          dPrev[l + 1].row(static_cast<Eigen::Index>(c)) += pass.weights[l][c] * dA.row(i);
        }
      }
    }
    if (k > 1) dH = std::move(dPrev);
  }
}

/// Row-wise argmax of logits.
template <typename Scalar>
std::vector<int> argmax_rows(const RowMatrix<Scalar>& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    Eigen::Index best = 0;
    logits.row(i).maxCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

}  // namespace hiersage
