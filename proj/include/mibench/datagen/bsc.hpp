#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mibench/errors.hpp"
#include "mibench/matrix.hpp"
#include "mibench/rng.hpp"

namespace mibench {

// Binary entropy H2(beta) in bits, with 0*log(0) := 0.
inline double binary_entropy(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("binary_entropy: beta must lie in [0, 1]");
  double h = 0.0;
  if (beta > 0.0) h -= beta * std::log2(beta);
  if (beta < 1.0) h -= (1.0 - beta) * std::log2(1.0 - beta);
  return h;
}

using Bits = std::vector<std::uint8_t>;

// Flip each bit independently with probability beta. The same beta applies to
// every information source.
inline Bits apply_bsc(const Bits& bits, double beta, Rng& rng) {
  if (!(beta >= 0.0 && beta <= 0.5)) throw ConfigError("apply_bsc: beta must lie in [0, 0.5]");
  if (beta == 0.0) return bits;
  std::bernoulli_distribution flip(beta);
  Bits out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    out[i] = flip(rng) ? static_cast<std::uint8_t>(1 - bits[i]) : bits[i];
  return out;
}

// Brute-force MI (bits) of the 2x2 joint pmf p(c, y~) with uniform c and a
// crossover beta. Exists solely to validate the closed-form channel MI.
inline double bsc_mi_oracle(double beta) {
  if (!(beta >= 0.0 && beta <= 0.5)) throw ConfigError("bsc_mi_oracle: beta must lie in [0, 0.5]");
  const double p[2][2] = {{0.5 * (1.0 - beta), 0.5 * beta},
                          {0.5 * beta, 0.5 * (1.0 - beta)}};
  const double pc[2] = {0.5, 0.5};
  const double py[2] = {p[0][0] + p[1][0], p[0][1] + p[1][1]};
  double mi = 0.0;
  for (int c = 0; c < 2; ++c)
    for (int y = 0; y < 2; ++y) {
      if (p[c][y] <= 0.0) continue;
      mi += p[c][y] * std::log2(p[c][y] / (pc[c] * py[y]));
    }
  return mi;
}

// Per-source MI of d_s independent uniform bits through the channel, in bits.
inline double bsc_true_mi_bits(Index d_s, double beta) {
  return static_cast<double>(d_s) * (1.0 - binary_entropy(beta));
}

// Invert d_s * (1 - H2(beta)) = target_bits for beta in [0, 0.5]. H2 has no
// closed-form inverse on this branch; bisection to ~1e-14.
inline double beta_for_mi_bits(Index d_s, double target_bits) {
  if (d_s < 1) throw ConfigError("beta_for_mi_bits: d_s must be >= 1");
  if (!(target_bits >= 0.0 && target_bits <= static_cast<double>(d_s) + 1e-12))
    throw ConfigError("beta_for_mi_bits: target MI must lie in [0, d_s] bits");
  const double target_h = 1.0 - std::min(1.0, target_bits / static_cast<double>(d_s));
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < target_h)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mibench
