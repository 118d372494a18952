#pragma once

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

#include "mibench/adam.hpp"
#include "mibench/datagen/pair_batch.hpp"
#include "mibench/mlp.hpp"

namespace mibench {

// Dataset-validity gate: trains one linear logistic probe per class bit on x
// and reports the mean held-out accuracy. Accuracy 1.0 licenses treating the
// class entropy as the dataset's true MI.
inline double verify_decodability(const Matrix& x, const std::vector<std::uint8_t>& bits,
                                  Index d_s, Index max_iters, std::uint64_t seed = 0) {
  const Index n = x.rows();
  require_shape(static_cast<Index>(bits.size()) == n * d_s,
                "verify_decodability: bits size must be n * d_s");
  if (n < 10) throw ConfigError("verify_decodability: need at least 10 samples");

  // Deterministic shuffle, 80/20 split.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng = make_rng(seed, rng_stream::kDecodability);
  std::shuffle(order.begin(), order.end(), rng);
  const Index n_train = (n * 8) / 10;
  const Index n_test = n - n_train;

  Matrix x_train(n_train, x.cols()), x_test(n_test, x.cols());
  for (Index i = 0; i < n_train; ++i) x_train.row(i) = x.row(order[static_cast<std::size_t>(i)]);
  for (Index i = 0; i < n_test; ++i)
    x_test.row(i) = x.row(order[static_cast<std::size_t>(n_train + i)]);

  double total_accuracy = 0.0;
  for (Index s = 0; s < d_s; ++s) {
    Matrix targets(n_train, 1);
    for (Index i = 0; i < n_train; ++i)
      targets(i, 0) = static_cast<double>(bits[static_cast<std::size_t>(order[static_cast<std::size_t>(i)] * d_s + s)]);

    MlpParams probe = init_mlp(x.cols(), 1, 1, 1, rng);
    AdamConfig adam_cfg;
    adam_cfg.lr = 0.05;
    AdamState adam = AdamState::init(std::as_const(probe).tensors(), adam_cfg);

    for (Index it = 0; it < max_iters; ++it) {
      MlpCache cache;
      Matrix logits = mlp_forward(probe, x_train, &cache);
      // d(mean BCE)/d(logit) = (sigmoid(z) - t) / n
      Matrix grad = ((1.0 / (1.0 + (-logits.array()).exp())) - targets.array()).matrix() /
                    static_cast<double>(n_train);
      MlpGrads grads = mlp_backward(probe, cache, grad);
      adam_step(probe.tensors(), grads, adam);
    }

    Matrix logits = mlp_forward(probe, x_test);
    Index correct = 0;
    for (Index i = 0; i < n_test; ++i) {
      const int pred = logits(i, 0) > 0.0 ? 1 : 0;
      const int truth = bits[static_cast<std::size_t>(order[static_cast<std::size_t>(n_train + i)] * d_s + s)];
      if (pred == truth) ++correct;
    }
    total_accuracy += static_cast<double>(correct) / static_cast<double>(n_test);
  }
  return total_accuracy / static_cast<double>(d_s);
}

inline double verify_decodability(const PairBatch& batch, Index max_iters, std::uint64_t seed = 0) {
  return verify_decodability(batch.x, batch.class_bits_x, batch.d_s, max_iters, seed);
}

}  // namespace mibench
