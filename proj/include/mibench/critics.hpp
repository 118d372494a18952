#pragma once

#include <string>
#include <vector>

#include "mibench/mlp.hpp"

namespace mibench {

enum class CriticKind { Inner, Bilinear, Separable, Joint };

inline const char* to_string(CriticKind k) {
  switch (k) {
    case CriticKind::Inner: return "inner";
    case CriticKind::Bilinear: return "bilinear";
    case CriticKind::Separable: return "separable";
    case CriticKind::Joint: return "joint";
  }
  return "?";
}

struct CriticConfig {
  CriticKind kind = CriticKind::Joint;
  Index hidden_dim = 256;
  Index depth = 2;
  Index embed_dim = 32;  // separable only
};

// K x K critic outputs over all ordered pairs; scores(i, j) = f(x_i, y_j).
// Diagonal entries are joint-distribution pairs, off-diagonal marginal pairs.
struct ScoreMatrix {
  Matrix scores;
  Index k() const { return scores.rows(); }
};

struct CriticParams {
  CriticKind kind = CriticKind::Inner;
  Matrix bilinear_w;           // bilinear: d_x x d_y
  MlpParams embed_x, embed_y;  // separable
  MlpParams joint;             // joint: one MLP on [x, y]

  std::vector<Matrix*> tensors() {
    switch (kind) {
      case CriticKind::Inner: return {};
      case CriticKind::Bilinear: return {&bilinear_w};
      case CriticKind::Separable: {
        auto t = embed_x.tensors();
        for (Matrix* p : embed_y.tensors()) t.push_back(p);
        return t;
      }
      case CriticKind::Joint: return joint.tensors();
    }
    return {};
  }
  std::vector<const Matrix*> tensors() const {
    switch (kind) {
      case CriticKind::Inner: return {};
      case CriticKind::Bilinear: return {&bilinear_w};
      case CriticKind::Separable: {
        auto t = embed_x.tensors();
        std::vector<const Matrix*> out(t.begin(), t.end());
        for (const Matrix* p : embed_y.tensors()) out.push_back(p);
        return out;
      }
      case CriticKind::Joint: return joint.tensors();
    }
    return {};
  }
};

// Gradients in the same order as CriticParams::tensors().
using CriticGrads = std::vector<Matrix>;

struct CriticCache {
  Index k = 0;
  Matrix x, y;                 // inner / bilinear
  MlpCache cache_x, cache_y;   // separable
  Matrix emb_x, emb_y;         // separable embeddings, K x embed_dim
  MlpCache cache_joint;        // joint, K^2 rows
  // MLP rows evaluated by the producing call: 2K for separable, K^2 for joint.
  Index mlp_rows_evaluated = 0;
};

inline CriticParams init_critic(const CriticConfig& config, Index d_x, Index d_y, Rng& rng) {
  CriticParams p;
  p.kind = config.kind;
  switch (config.kind) {
    case CriticKind::Inner:
      if (d_x != d_y) throw ConfigError("inner critic requires equal x and y dimensions");
      break;
    case CriticKind::Bilinear: {
      // Identity plus small uniform noise so early scores start near dot products.
      p.bilinear_w = Matrix::Zero(d_x, d_y);
      p.bilinear_w.setIdentity();
      std::uniform_real_distribution<double> uniform(-0.01, 0.01);
      for (Index r = 0; r < d_x; ++r)
        for (Index c = 0; c < d_y; ++c) p.bilinear_w(r, c) += uniform(rng);
      break;
    }
    case CriticKind::Separable:
      p.embed_x = init_mlp(d_x, config.hidden_dim, config.depth, config.embed_dim, rng);
      p.embed_y = init_mlp(d_y, config.hidden_dim, config.depth, config.embed_dim, rng);
      break;
    case CriticKind::Joint:
      p.joint = init_mlp(d_x + d_y, config.hidden_dim, config.depth, 1, rng);
      break;
  }
  return p;
}

inline CriticParams init_critic(const CriticConfig& config, Index d_x, Index d_y,
                                std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return init_critic(config, d_x, d_y, rng);
}

// Scores for all ordered pairs of a batch. The joint critic evaluates the K^2
// concatenated rows as one forward pass; the separable critic evaluates K + K
// embedding rows and takes their inner products.
inline ScoreMatrix score_matrix(const CriticConfig& config, const CriticParams& params,
                                const Matrix& batch_x, const Matrix& batch_y,
                                CriticCache* cache = nullptr) {
  const Index k = batch_x.rows();
  require_shape(k >= 2, "score_matrix: batch size must be >= 2");
  require_shape(batch_y.rows() == k, "score_matrix: batch_x/batch_y row mismatch");
  if (cache) {
    *cache = CriticCache{};
    cache->k = k;
  }

  ScoreMatrix s;
  switch (config.kind) {
    case CriticKind::Inner:
      require_shape(batch_x.cols() == batch_y.cols(), "inner critic: dimension mismatch");
      s.scores = batch_x * batch_y.transpose();
      break;
    case CriticKind::Bilinear:
      require_shape(batch_x.cols() == params.bilinear_w.rows() &&
                        batch_y.cols() == params.bilinear_w.cols(),
                    "bilinear critic: dimension mismatch");
      s.scores = (batch_x * params.bilinear_w) * batch_y.transpose();
      if (cache) {
        cache->x = batch_x;
        cache->y = batch_y;
      }
      break;
    case CriticKind::Separable: {
      MlpCache cx, cy;
      Matrix fx = mlp_forward(params.embed_x, batch_x, cache ? &cx : nullptr);
      Matrix fy = mlp_forward(params.embed_y, batch_y, cache ? &cy : nullptr);
      s.scores = fx * fy.transpose();
      if (cache) {
        cache->cache_x = std::move(cx);
        cache->cache_y = std::move(cy);
        cache->emb_x = std::move(fx);
        cache->emb_y = std::move(fy);
        cache->mlp_rows_evaluated = 2 * k;
      }
      break;
    }
    case CriticKind::Joint: {
      const Index dx = batch_x.cols(), dy = batch_y.cols();
      require_shape(dx + dy == params.joint.input_dim(), "joint critic: dimension mismatch");
      Matrix stacked(k * k, dx + dy);
      for (Index i = 0; i < k; ++i) {
        stacked.block(i * k, 0, k, dx) = batch_x.row(i).replicate(k, 1);
        stacked.block(i * k, dx, k, dy) = batch_y;
      }
      MlpCache cj;
      Matrix out = mlp_forward(params.joint, stacked, cache ? &cj : nullptr);
      s.scores = Eigen::Map<Matrix>(out.data(), k, k);
      if (cache) {
        cache->cache_joint = std::move(cj);
        cache->mlp_rows_evaluated = k * k;
      }
      break;
    }
  }
  require_finite(s.scores, "score_matrix");
  return s;
}

// Gradients of sum_ij grad_scores(i,j) * scores(i,j) with respect to params.
inline CriticGrads score_backward(const CriticConfig& config, const CriticParams& params,
                                  const CriticCache& cache, const Matrix& grad_scores) {
  require_shape(grad_scores.rows() == cache.k && grad_scores.cols() == cache.k,
                "score_backward: grad_scores must be K x K");
  switch (config.kind) {
    case CriticKind::Inner:
      return {};
    case CriticKind::Bilinear: {
      require_shape(cache.x.rows() == cache.k, "score_backward: cache does not match call");
      CriticGrads g;
      g.push_back(cache.x.transpose() * grad_scores * cache.y);
      return g;
    }
    case CriticKind::Separable: {
      Matrix d_fx = grad_scores * cache.emb_y;
      Matrix d_fy = grad_scores.transpose() * cache.emb_x;
      MlpGrads gx = mlp_backward(params.embed_x, cache.cache_x, d_fx);
      MlpGrads gy = mlp_backward(params.embed_y, cache.cache_y, d_fy);
      CriticGrads g = std::move(gx);
      for (auto& m : gy) g.push_back(std::move(m));
      return g;
    }
    case CriticKind::Joint: {
      Matrix d_out(cache.k * cache.k, 1);
      for (Index i = 0; i < cache.k; ++i)
        for (Index j = 0; j < cache.k; ++j) d_out(i * cache.k + j, 0) = grad_scores(i, j);
      return mlp_backward(params.joint, cache.cache_joint, d_out);
    }
  }
  return {};
}

}  // namespace mibench
