#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mibench/matrix.hpp"
#include "mibench/rng.hpp"

namespace mibench {

// One dense layer. Weights are out x in, bias is 1 x out.
struct DenseLayer {
  Matrix weight;
  Matrix bias;
};

// Fully connected network: ReLU on hidden layers, identity on the output.
struct MlpParams {
  std::vector<DenseLayer> layers;

  Index depth() const { return static_cast<Index>(layers.size()); }
  Index input_dim() const { return layers.front().weight.cols(); }
  Index output_dim() const { return layers.back().weight.rows(); }

  std::vector<Matrix*> tensors() {
    std::vector<Matrix*> t;
    t.reserve(2 * layers.size());
    for (auto& l : layers) {
      t.push_back(&l.weight);
      t.push_back(&l.bias);
    }
    return t;
  }
  std::vector<const Matrix*> tensors() const {
    std::vector<const Matrix*> t;
    t.reserve(2 * layers.size());
    for (const auto& l : layers) {
      t.push_back(&l.weight);
      t.push_back(&l.bias);
    }
    return t;
  }

  Index parameter_count() const {
    Index n = 0;
    for (const auto& l : layers) n += l.weight.size() + l.bias.size();
    return n;
  }
};

// Activation record from a forward pass. acts[l] is the input fed to layer l
// (acts[0] = network input, acts[l>0] = post-ReLU output of layer l-1).
struct MlpCache {
  std::vector<Matrix> acts;
  Index rows() const { return acts.empty() ? 0 : acts.front().rows(); }
};

// Parameter gradients in tensors() order: dW1, db1, dW2, db2, ...
using MlpGrads = std::vector<Matrix>;

// Zero-mean uniform fan-in initialization, bound sqrt(1/fan_in); biases zero.
// Weights are filled row by row so the layout is part of the seed contract.
inline MlpParams init_mlp(Index input_dim, Index hidden_dim, Index depth, Index output_dim,
                          Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1 || depth < 1 || output_dim < 1)
    throw ConfigError("init_mlp: all dimensions must be >= 1");
  MlpParams params;
  params.layers.reserve(static_cast<std::size_t>(depth));
  for (Index l = 0; l < depth; ++l) {
    const Index in = (l == 0) ? input_dim : hidden_dim;
    const Index out = (l == depth - 1) ? output_dim : hidden_dim;
    const double bound = std::sqrt(1.0 / static_cast<double>(in));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    DenseLayer layer;
    layer.weight.resize(out, in);
    for (Index r = 0; r < out; ++r)
      for (Index c = 0; c < in; ++c) layer.weight(r, c) = uniform(rng);
    layer.bias = Matrix::Zero(1, out);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

inline MlpParams init_mlp(Index input_dim, Index hidden_dim, Index depth, Index output_dim,
                          std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return init_mlp(input_dim, hidden_dim, depth, output_dim, rng);
}

// Forward pass. Pass a cache to enable an exact backward pass later.
inline Matrix mlp_forward(const MlpParams& params, const Matrix& x, MlpCache* cache = nullptr) {
  require_shape(x.cols() == params.input_dim(), "mlp_forward: input dim mismatch");
  if (cache) {
    cache->acts.clear();
    cache->acts.push_back(x);
  }
  Matrix a = x;
  const std::size_t depth = params.layers.size();
  for (std::size_t l = 0; l < depth; ++l) {
    const DenseLayer& layer = params.layers[l];
    Matrix z = a * layer.weight.transpose();
    z.rowwise() += layer.bias.row(0);
    if (l + 1 < depth) {
      a = z.cwiseMax(0.0);
      if (cache) cache->acts.push_back(a);
    } else {
      a = std::move(z);
    }
  }
  return a;
}

// Exact reverse-mode gradients of the forward map. ReLU subgradient at 0 is 0.
// grad_input is optional; parameter-only training paths skip it.
inline MlpGrads mlp_backward(const MlpParams& params, const MlpCache& cache,
                             const Matrix& grad_output, Matrix* grad_input = nullptr) {
  const Index depth = params.depth();
  require_shape(static_cast<Index>(cache.acts.size()) == depth,
                "mlp_backward: cache does not match network depth");
  for (Index l = 0; l < depth; ++l)
    require_shape(cache.acts[static_cast<std::size_t>(l)].cols() == params.layers[static_cast<std::size_t>(l)].weight.cols(),
                  "mlp_backward: cache layer width mismatch");
  require_shape(grad_output.rows() == cache.rows() && grad_output.cols() == params.output_dim(),
                "mlp_backward: grad_output shape mismatch");

  MlpGrads grads(static_cast<std::size_t>(2 * depth));
  Matrix delta = grad_output;  // d(loss)/d(pre-activation) of the current layer
  for (Index l = depth - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const Matrix& layer_input = cache.acts[li];
    grads[2 * li] = delta.transpose() * layer_input;
    grads[2 * li + 1] = delta.colwise().sum();
    if (l > 0) {
      delta = delta * params.layers[li].weight;
      // Stored post-ReLU activation is positive exactly where the unit passed.
      delta.array() *= (cache.acts[li].array() > 0.0).cast<double>();
    } else if (grad_input) {
      *grad_input = delta * params.layers[0].weight;
    }
  }
  return grads;
}

}  // namespace mibench
