#pragma once

#include <cmath>
#include <vector>

#include "mibench/matrix.hpp"

namespace mibench {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment buffers mirror the parameter tensors one-to-one.
struct AdamState {
  AdamConfig config;
  std::vector<Matrix> m;
  std::vector<Matrix> v;
  long step = 0;

  static AdamState init(const std::vector<const Matrix*>& params, AdamConfig cfg = {}) {
    AdamState s;
    s.config = cfg;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Matrix* p : params) {
      s.m.push_back(Matrix::Zero(p->rows(), p->cols()));
      s.v.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
    return s;
  }
};

// Standard Adam with bias correction, in place. Descent direction: pass the
// gradient of a loss to minimize.
inline void adam_step(const std::vector<Matrix*>& params, const std::vector<Matrix>& grads,
                      AdamState& state) {
  require_shape(params.size() == grads.size() && params.size() == state.m.size(),
                "adam_step: tensor count mismatch");
  state.step += 1;
  const AdamConfig& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& w = *params[i];
    const Matrix& g = grads[i];
    require_shape(w.rows() == g.rows() && w.cols() == g.cols(), "adam_step: gradient shape mismatch");
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g.cwiseProduct(g);
    w.array() -= c.lr * (state.m[i].array() / bc1) / ((state.v[i].array() / bc2).sqrt() + c.epsilon);
  }
}

}  // namespace mibench
