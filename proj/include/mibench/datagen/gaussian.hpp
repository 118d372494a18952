#pragma once

#include <cmath>

#include "mibench/datagen/pair_batch.hpp"
#include "mibench/rng.hpp"

namespace mibench {

// Zero-mean Gaussian pair with component-wise correlation rho.
// True MI = -(d_g / 2) ln(1 - rho^2) nats.
struct GaussianSpec {
  Index d_g = 10;
  double rho = 0.0;

  void validate() const {
    if (d_g < 1) throw ConfigError("GaussianSpec: d_g must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("GaussianSpec: rho must lie in [0, 1)");
  }

  double true_mi_nats() const {
    return -0.5 * static_cast<double>(d_g) * std::log1p(-rho * rho);
  }
};

// rho achieving a target MI (nats): sqrt(1 - exp(-2 * target / d_g)).
inline double gaussian_rho_for_mi(Index d_g, double target_mi_nats) {
  if (d_g < 1) throw ConfigError("gaussian_rho_for_mi: d_g must be >= 1");
  if (target_mi_nats < 0.0) throw ConfigError("gaussian_rho_for_mi: target MI must be >= 0");
  return std::sqrt(-std::expm1(-2.0 * target_mi_nats / static_cast<double>(d_g)));
}

// x ~ N(0, I); y = rho * x + sqrt(1 - rho^2) * eps with independent eps.
inline PairBatch sample_gaussian_pair(const GaussianSpec& spec, Index k, Rng& rng) {
  spec.validate();
  std::normal_distribution<double> normal(0.0, 1.0);
  PairBatch batch;
  batch.x.resize(k, spec.d_g);
  batch.y.resize(k, spec.d_g);
  const double mix = std::sqrt(1.0 - spec.rho * spec.rho);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < spec.d_g; ++j) {
      const double xv = normal(rng);
      batch.x(i, j) = xv;
      batch.y(i, j) = spec.rho * xv + mix * normal(rng);
    }
  return batch;
}

}  // namespace mibench
