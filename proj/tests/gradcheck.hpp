#pragma once

// Central finite-difference check of backward() on a small random problem.

#include <cmath>
#include <vector>

#include "hiersage/sage.hpp"
#include "oracles.hpp"

namespace gradcheck {

using namespace hiersage;

struct Result {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
};

/// |analytic − numeric| / max(|analytic|, |numeric|, floor). The floor keeps
/// parameters whose true gradient is ~0 from turning rounding noise into a
/// large ratio.
inline double relative_error(double a, double n, double floor = 1e-6) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor});
}

/// Two layers (input 5, hidden 4 and 4), batch of 3, four leaf classes under
/// two groups so that WMEAN-1 and WMEAN-2 produce distinct weights.
inline Result run(WeightKind kind, std::uint64_t seed) {
  const auto h = make_hierarchy({2, 2});
  Rng rng(seed);
  const auto g = oracle::random_connected_graph(14, 0.3, rng);
  std::vector<int> labels(g.num_nodes());
  for (auto& l : labels) l = static_cast<int>(uniform_index(rng, 4));
  labels[5] = -1;  // one unknown label exercises unknown_label_weight

  RowMatrix<double> F(static_cast<Eigen::Index>(g.num_nodes()), 5);
  for (Eigen::Index i = 0; i < F.size(); ++i) F.data()[i] = uniform_real(rng, -1.0, 1.0);

  ModelConfig mc;
  mc.hidden = {4, 4};
  mc.policy.kind = kind;
  SageModel<double> model(5, mc, h.num_leaves(), seed);
  // Positive biases keep most units away from the ReLU kink.
  for (auto& b : model.params().b) b.setConstant(0.1);
  const WeightTable table(mc.policy, h);

  const std::vector<NodeId> batch{0, 3, 7};
  const std::vector<int> targets{labels[0] < 0 ? 0 : labels[0], 2, 1};
  std::vector<int> wl = labels;
  for (NodeId u : batch) wl[u] = -1;
  SampleFanout fanout;
  fanout.sizes = {3, 2};
  const auto sample = sample_neighbourhood(g, batch, fanout, rng);

  ForwardPass<double> pass;
  forward(model, sample, F, wl, table, pass);
  auto grad = model.params().zeros_like();
  backward(model, sample, pass, targets, grad);

  auto loss_at = [&]() {
    ForwardPass<double> p;
    forward(model, sample, F, wl, table, p);
    return cross_entropy(p, targets);
  };

  Result r;
  const double eps = 1e-6;
  auto params = model.params().tensors();
  auto grads = grad.tensors();
  for (std::size_t t = 0; t < params.size(); ++t)
    for (std::size_t j = 0; j < params[t].size(); ++j) {
      const double orig = params[t][j];
      params[t][j] = orig + eps;
      const double up = loss_at();
      params[t][j] = orig - eps;
      const double down = loss_at();
      params[t][j] = orig;
      const double numeric = (up - down) / (2 * eps);
      r.max_rel_error = std::max(r.max_rel_error, relative_error(grads[t][j], numeric));
      ++r.checked;
    }
  return r;
}

}  // namespace gradcheck
