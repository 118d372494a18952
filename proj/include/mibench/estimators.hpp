#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mibench/critics.hpp"
#include "mibench/matrix.hpp"

namespace mibench {

enum class EstimatorFamily { DV, NWJ, InfoNCE, JS, MINE, SMILE };

struct EstimatorKind {
  EstimatorFamily family = EstimatorFamily::DV;
  double tau = std::numeric_limits<double>::infinity();  // SMILE clip range

  static EstimatorKind dv() { return {EstimatorFamily::DV, 0.0}; }
  static EstimatorKind nwj() { return {EstimatorFamily::NWJ, 0.0}; }
  static EstimatorKind infonce() { return {EstimatorFamily::InfoNCE, 0.0}; }
  static EstimatorKind js() { return {EstimatorFamily::JS, 0.0}; }
  static EstimatorKind mine() { return {EstimatorFamily::MINE, 0.0}; }
  static EstimatorKind smile(double tau) {
    if (!(tau > 0.0)) throw ConfigError("SMILE tau must be positive (or infinity)");
    return {EstimatorFamily::SMILE, tau};
  }
};

inline std::string to_string(const EstimatorKind& k) {
  switch (k.family) {
    case EstimatorFamily::DV: return "DV";
    case EstimatorFamily::NWJ: return "NWJ";
    case EstimatorFamily::InfoNCE: return "InfoNCE";
    case EstimatorFamily::JS: return "JS";
    case EstimatorFamily::MINE: return "MINE";
    case EstimatorFamily::SMILE:
      if (std::isinf(k.tau)) return "SMILE-inf";
      // Integer taus print without a trailing .0 to match the usual naming.
      if (k.tau == std::round(k.tau)) return "SMILE-" + std::to_string(static_cast<long>(k.tau));
      return "SMILE-" + std::to_string(k.tau);
  }
  return "?";
}

// Running exponential moving average of E_marg[e^s]. Kept in the log domain so
// large scores cannot overflow the partition term.
struct EmaState {
  double decay = 0.99;
  bool initialized = false;
  double log_value = 0.0;

  double value() const {
    return initialized ? std::exp(log_value) : std::numeric_limits<double>::quiet_NaN();
  }

  static EmaState with_value(double value, double decay = 0.99) {
    if (!(value > 0.0)) throw ConfigError("EmaState value must be positive");
    EmaState s;
    s.decay = decay;
    s.initialized = true;
    s.log_value = std::log(value);
    return s;
  }

  void update(double log_batch_value) {
    if (!initialized) {
      log_value = log_batch_value;
      initialized = true;
      return;
    }
    const double a = std::log(decay) + log_value;
    const double b = std::log1p(-decay) + log_batch_value;
    const double m = std::max(a, b);
    log_value = m + std::log(std::exp(a - m) + std::exp(b - m));
  }
};

// Batch means over a score matrix: diagonal entries sample the joint, the
// K(K-1) off-diagonal entries sample the product of marginals.
struct BatchExpectations {
  double joint_mean = 0.0;
  double marg_mean = 0.0;
};

namespace detail {

inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline void require_valid(const ScoreMatrix& s) {
  require_shape(s.scores.rows() == s.scores.cols() && s.k() >= 2,
                "estimator: score matrix must be square with K >= 2");
  require_finite(s.scores, "estimator: scores");
}

inline double diag_mean(const Matrix& s) {
  return s.diagonal().mean();
}

// log of the off-diagonal mean of exp(s), max-shifted. Scores are clamped to
// [-tau, tau] first, which is exactly clip(e^s, e^-tau, e^tau) in the exponent.
inline double log_mean_exp_offdiag(const Matrix& s, double tau = std::numeric_limits<double>::infinity()) {
  const Index k = s.rows();
  double hi = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const double v = std::clamp(s(i, j), -tau, tau);
      hi = std::max(hi, v);
    }
  double sum = 0.0;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) {
      if (i == j) continue;
      sum += std::exp(std::clamp(s(i, j), -tau, tau) - hi);
    }
  const double m = static_cast<double>(k * (k - 1));
  return hi + std::log(sum / m);
}

// InfoNCE core: mean_i [ s_ii - log((1/K) sum_j e^{s_ij}) ], full row incl. diagonal.
inline double infonce_value(const Matrix& s) {
  const Index k = s.rows();
  double acc = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double hi = s.row(i).maxCoeff();
    double sum = 0.0;
    for (Index j = 0; j < k; ++j) sum += std::exp(s(i, j) - hi);
    acc += s(i, i) - (hi + std::log(sum / static_cast<double>(k)));
  }
  return acc / static_cast<double>(k);
}

}  // namespace detail

inline BatchExpectations score_means(const ScoreMatrix& s) {
  detail::require_valid(s);
  const Index k = s.k();
  double off = 0.0;
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j)
      if (i != j) off += s.scores(i, j);
  return {detail::diag_mean(s.scores), off / static_cast<double>(k * (k - 1))};
}

// MI estimate in nats for the given estimator, evaluated on a score matrix.
// MINE evaluates the DV form; JS evaluates the NWJ form; SMILE clips the
// marginal density ratios to [e^-tau, e^tau].
inline double estimate(const EstimatorKind& kind, const ScoreMatrix& s) {
  detail::require_valid(s);
  const Matrix& m = s.scores;
  double result = 0.0;
  switch (kind.family) {
    case EstimatorFamily::DV:
    case EstimatorFamily::MINE:
      result = detail::diag_mean(m) - detail::log_mean_exp_offdiag(m);
      break;
    case EstimatorFamily::NWJ:
    case EstimatorFamily::JS:
      result = detail::diag_mean(m) - std::exp(detail::log_mean_exp_offdiag(m) - 1.0);
      break;
    case EstimatorFamily::InfoNCE:
      result = detail::infonce_value(m);
      break;
    case EstimatorFamily::SMILE:
      result = detail::diag_mean(m) - detail::log_mean_exp_offdiag(m, kind.tau);
      break;
  }
  require_finite(result, "estimate(" + to_string(kind) + ")");
  return result;
}

struct LossResult {
  double loss = 0.0;    // scalar to maximize
  Matrix grad_scores;   // exact d(loss)/d(scores), K x K
};

// Optimization loss and its exact gradient with respect to every score entry.
// DV, NWJ and InfoNCE optimize their estimate directly; JS and SMILE optimize
// the softplus JS loss; MINE divides the partition term by a running EMA that
// is treated as a constant in the gradient (updated before use, initialized to
// the current batch value on the first call).
inline LossResult optimization_loss(const EstimatorKind& kind, const ScoreMatrix& s,
                                    EmaState* ema = nullptr) {
  detail::require_valid(s);
  const Matrix& m = s.scores;
  const Index k = s.k();
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(k * (k - 1));

  LossResult out;
  out.grad_scores = Matrix::Zero(k, k);

  switch (kind.family) {
    case EstimatorFamily::DV: {
      const double lme = detail::log_mean_exp_offdiag(m);
      out.loss = detail::diag_mean(m) - lme;
      const double log_denom = lme + std::log(md);  // log sum_offdiag e^s
      for (Index i = 0; i < k; ++i) {
        out.grad_scores(i, i) = 1.0 / kd;
        for (Index j = 0; j < k; ++j)
          if (i != j) out.grad_scores(i, j) = -std::exp(m(i, j) - log_denom);
      }
      break;
    }
    case EstimatorFamily::NWJ: {
      out.loss = detail::diag_mean(m) - std::exp(detail::log_mean_exp_offdiag(m) - 1.0);
      for (Index i = 0; i < k; ++i) {
        out.grad_scores(i, i) = 1.0 / kd;
        for (Index j = 0; j < k; ++j)
          if (i != j) out.grad_scores(i, j) = -std::exp(m(i, j) - 1.0) / md;
      }
      break;
    }
    case EstimatorFamily::InfoNCE: {
      out.loss = detail::infonce_value(m);
      for (Index i = 0; i < k; ++i) {
        const double hi = m.row(i).maxCoeff();
        double denom = 0.0;
        for (Index j = 0; j < k; ++j) denom += std::exp(m(i, j) - hi);
        for (Index j = 0; j < k; ++j) {
          const double softmax = std::exp(m(i, j) - hi) / denom;
          out.grad_scores(i, j) = ((i == j ? 1.0 : 0.0) - softmax) / kd;
        }
      }
      break;
    }
    case EstimatorFamily::JS:
    case EstimatorFamily::SMILE: {
      double acc = 0.0;
      for (Index i = 0; i < k; ++i) {
        acc += -detail::softplus(-m(i, i)) / kd;
        out.grad_scores(i, i) = detail::sigmoid(-m(i, i)) / kd;
        for (Index j = 0; j < k; ++j) {
          if (i == j) continue;
          acc -= detail::softplus(m(i, j)) / md;
          out.grad_scores(i, j) = -detail::sigmoid(m(i, j)) / md;
        }
      }
      out.loss = acc;
      break;
    }
    case EstimatorFamily::MINE: {
      if (!ema) throw ConfigError("MINE optimization requires an EmaState");
      const double log_em = detail::log_mean_exp_offdiag(m);
      ema->update(log_em);
      out.loss = detail::diag_mean(m) - std::exp(log_em - ema->log_value);
      for (Index i = 0; i < k; ++i) {
        out.grad_scores(i, i) = 1.0 / kd;
        for (Index j = 0; j < k; ++j)
          if (i != j)
            out.grad_scores(i, j) = -std::exp(m(i, j) - std::log(md) - ema->log_value);
      }
      break;
    }
  }
  require_finite(out.loss, "optimization_loss(" + to_string(kind) + ")");
  require_finite(out.grad_scores, "optimization_loss gradient (" + to_string(kind) + ")");
  return out;
}

constexpr double kNatsPerBit = 0.6931471805599453;  // ln 2

inline double nats_to_bits(double nats) { return nats / kNatsPerBit; }
inline double bits_to_nats(double bits) { return bits * kNatsPerBit; }

}  // namespace mibench
