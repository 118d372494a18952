#pragma once

#include <cmath>

#include "mibench/datagen/bsc.hpp"
#include "mibench/datagen/pair_batch.hpp"
#include "mibench/rng.hpp"

namespace mibench {

// Synthetic separable sentence-embedding stand-in: per source bit, a
// segment_dim Gaussian blob around one of two antipodal class means; segments
// concatenated in 1D. The margin/sigma ratio keeps a linear decoder error-free
// on any finite sample.
struct EmbeddingSpec {
  Index d_s = 10;
  Index segment_dim = 768;
  double noise_sigma = 1.0;
  double margin = 16.0;
  double beta = 0.0;

  Index d_r() const { return d_s * segment_dim; }

  void validate() const {
    if (d_s < 1) throw ConfigError("EmbeddingSpec: d_s must be >= 1");
    if (segment_dim < 1) throw ConfigError("EmbeddingSpec: segment_dim must be >= 1");
    if (noise_sigma < 0.0) throw ConfigError("EmbeddingSpec: noise_sigma must be >= 0");
    if (!(margin > 0.0)) throw ConfigError("EmbeddingSpec: margin must be positive");
    if (noise_sigma > 0.0 && margin / noise_sigma < 8.0)
      throw ConfigError("EmbeddingSpec: margin must be >= 8 * noise_sigma for separability");
    if (!(beta >= 0.0 && beta <= 0.5)) throw ConfigError("EmbeddingSpec: beta must lie in [0, 0.5]");
  }

  double true_mi_bits() const { return bsc_true_mi_bits(d_s, beta); }
  double true_mi_nats() const { return true_mi_bits() * 0.6931471805599453; }
};

// Class means are frozen once per seed: per source, a random unit direction u
// gives mu_0 = +(margin/2) u and mu_1 = -(margin/2) u, so the class-mean
// separation is exactly the margin.
struct EmbeddingModel {
  EmbeddingSpec spec;
  Matrix mu0;  // d_s x segment_dim
  Matrix mu1;

  static EmbeddingModel create(const EmbeddingSpec& spec, std::uint64_t seed) {
    spec.validate();
    EmbeddingModel model;
    model.spec = spec;
    model.mu0.resize(spec.d_s, spec.segment_dim);
    model.mu1.resize(spec.d_s, spec.segment_dim);
    Rng rng = make_rng(seed, rng_stream::kEmbeddingMeans);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Index s = 0; s < spec.d_s; ++s) {
      Eigen::RowVectorXd dir(spec.segment_dim);
      double norm = 0.0;
      do {
        for (Index j = 0; j < spec.segment_dim; ++j) dir(j) = normal(rng);
        norm = dir.norm();
      } while (norm == 0.0);
      dir *= (spec.margin / 2.0) / norm;
      model.mu0.row(s) = dir;
      model.mu1.row(s) = -dir;
    }
    return model;
  }

  PairBatch sample_pair(Index k, Rng& rng) const {
    std::uniform_int_distribution<int> coin(0, 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    PairBatch batch;
    batch.d_s = spec.d_s;
    batch.x.resize(k, spec.d_r());
    batch.y.resize(k, spec.d_r());
    batch.class_bits_x.resize(static_cast<std::size_t>(k * spec.d_s));
    batch.class_bits_y.resize(static_cast<std::size_t>(k * spec.d_s));

    auto fill = [&](Eigen::Ref<Eigen::RowVectorXd> row, const Bits& bits) {
      for (Index s = 0; s < spec.d_s; ++s) {
        const auto& mu = bits[static_cast<std::size_t>(s)] ? mu1 : mu0;
        for (Index j = 0; j < spec.segment_dim; ++j)
          row(s * spec.segment_dim + j) =
              mu(s, j) + (spec.noise_sigma > 0.0 ? spec.noise_sigma * normal(rng) : 0.0);
      }
    };

    for (Index i = 0; i < k; ++i) {
      Bits bits_x(static_cast<std::size_t>(spec.d_s));
      for (auto& b : bits_x) b = static_cast<std::uint8_t>(coin(rng));
      Bits bits_y = apply_bsc(bits_x, spec.beta, rng);
      fill(batch.x.row(i), bits_x);
      fill(batch.y.row(i), bits_y);
      std::copy(bits_x.begin(), bits_x.end(), batch.class_bits_x.begin() + i * spec.d_s);
      std::copy(bits_y.begin(), bits_y.end(), batch.class_bits_y.begin() + i * spec.d_s);
    }
    return batch;
  }
};

// One-off sampler; the model (and thus the class means) derives from the seed.
inline PairBatch sample_embedding_pair(const EmbeddingSpec& spec, Index k, std::uint64_t seed) {
  EmbeddingModel model = EmbeddingModel::create(spec, seed);
  Rng rng = make_rng(seed, rng_stream::kData);
  return model.sample_pair(k, rng);
}

}  // namespace mibench
