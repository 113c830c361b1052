#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/feature_matrix.hpp"
#include "hiersage/graph.hpp"
#include "hiersage/rng.hpp"

namespace hiersage {

struct WalkCorpus {
  std::vector<std::vector<NodeId>> walks;
  std::size_t length = 0;
  std::size_t walks_per_node = 0;
  std::size_t num_nodes = 0;
};

/// Unbiased random walks: `walks_per_node` walks of `length` nodes from
/// every non-isolated node. Each start node draws from its own sub-stream,
/// so the corpus is independent of `jobs`.
inline WalkCorpus random_walks(const Graph& g, std::size_t length, std::size_t walks_per_node,
                               std::uint64_t seed, unsigned jobs = 1) {
  if (length < 2) throw Error("walk length must be at least 2");
  const auto n = g.num_nodes();
  const std::uint64_t stream = derive_seed(seed, "walks");
  std::vector<std::vector<std::vector<NodeId>>> per_node(n);
  auto work = [&](NodeId lo, NodeId hi) {
    for (NodeId s = lo; s < hi; ++s) {
      if (g.degree(s) == 0) continue;
      Rng rng(derive_seed(stream, s));
      auto& out = per_node[s];
      out.reserve(walks_per_node);
      for (std::size_t r = 0; r < walks_per_node; ++r) {
        std::vector<NodeId> walk{s};
        walk.reserve(length);
        while (walk.size() < length) {
          auto nb = g.neighbors(walk.back());
          if (nb.empty()) break;
          walk.push_back(nb[uniform_index(rng, nb.size())]);
        }
        out.push_back(std::move(walk));
      }
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    work(0, static_cast<NodeId>(n));
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j)
      threads.emplace_back(work, static_cast<NodeId>(n * j / jobs), static_cast<NodeId>(n * (j + 1) / jobs));
    for (auto& t : threads) t.join();
  }
  // Round-major order: all first walks, then all second walks, ...
  WalkCorpus c{{}, length, walks_per_node, n};
  for (std::size_t r = 0; r < walks_per_node; ++r)
    for (NodeId s = 0; s < n; ++s)
      if (r < per_node[s].size()) c.walks.push_back(std::move(per_node[s][r]));
  return c;
}

struct SkipGramConfig {
  std::size_t dim = 128;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;
  std::uint64_t seed = 0;
};

struct EmbeddingTable {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;        // row-major input vectors
  std::vector<double> epoch_loss;    // mean SGNS loss per epoch

  std::span<const double> row(std::size_t u) const { return {values.data() + u * dim, dim}; }

  FeatureMatrix to_features() const {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < dim; ++k) names.push_back("emb_" + std::to_string(k));
    FeatureMatrix m(rows, std::move(names));
    for (std::size_t u = 0; u < rows; ++u)
      for (std::size_t k = 0; k < dim; ++k) m(u, k) = values[u * dim + k];
    return m;
  }
};

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

/// Skip-gram with negative sampling over a walk corpus. Noise is drawn
/// proportionally to corpus frequency^0.75 (frequency ∝ degree for unbiased
/// walks). The learning rate decays linearly to lr·1e-4 over all epochs.
/// Single-threaded and deterministic given the seed.
inline EmbeddingTable train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& cfg) {
  if (corpus.walks.empty()) throw Error("train_skipgram: empty walk corpus");
  if (cfg.dim == 0) throw Error("train_skipgram: dim must be >= 1");
  const std::size_t n = corpus.num_nodes;
  const std::size_t dim = cfg.dim;

  EmbeddingTable emb{n, dim, std::vector<double>(n * dim), {}};
  std::vector<double> out(n * dim, 0.0);
  Rng init(derive_seed(cfg.seed, "init"));
  for (auto& v : emb.values) v = (uniform01(init) - 0.5) / static_cast<double>(dim);

  std::vector<double> freq(n, 0.0);
  std::size_t tokens = 0;
  for (const auto& w : corpus.walks) {
    for (NodeId u : w) freq[u] += 1.0;
    tokens += w.size();
  }
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    acc += std::pow(freq[u], 0.75);
    cdf[u] = acc;
  }
  auto draw_noise = [&](Rng& rng) {
    const double x = uniform01(rng) * acc;
    return static_cast<NodeId>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
  };

  auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  auto log_sigmoid = [](double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); };

  Rng rng(derive_seed(cfg.seed, "sgns"));
  std::vector<std::size_t> order(corpus.walks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double total_steps = static_cast<double>(cfg.epochs) * static_cast<double>(tokens);
  double step = 0.0;
  std::vector<double> grad(dim);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), rng);
    double loss = 0.0;
    std::size_t pairs = 0;
    for (std::size_t wi : order) {
      const auto& walk = corpus.walks[wi];
      for (std::size_t i = 0; i < walk.size(); ++i, step += 1.0) {
        const double lr = cfg.lr * std::max(1e-4, 1.0 - step / total_steps);
        const NodeId center = walk[i];
        double* vin = &emb.values[center * dim];
        const std::size_t lo = i >= cfg.window ? i - cfg.window : 0;
        const std::size_t hi = std::min(walk.size(), i + cfg.window + 1);
        for (std::size_t j = lo; j < hi; ++j) {
          if (j == i) continue;
          const NodeId context = walk[j];
          std::fill(grad.begin(), grad.end(), 0.0);
          for (std::size_t s = 0; s <= cfg.negatives; ++s) {
            NodeId target = context;
            double label = 1.0;
            if (s > 0) {
              target = draw_noise(rng);
              if (target == context) continue;
              label = 0.0;
            }
            double* vout = &out[target * dim];
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += vin[k] * vout[k];
            loss -= label > 0 ? log_sigmoid(dot) : log_sigmoid(-dot);
            const double gcoef = (label - sigmoid(dot)) * lr;
            for (std::size_t k = 0; k < dim; ++k) {
              grad[k] += gcoef * vout[k];
              vout[k] += gcoef * vin[k];
            }
          }
          for (std::size_t k = 0; k < dim; ++k) vin[k] += grad[k];
          ++pairs;
        }
      }
    }
    emb.epoch_loss.push_back(pairs ? loss / static_cast<double>(pairs) : 0.0);
  }
  return emb;
}

}  // namespace hiersage
