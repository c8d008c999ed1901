#include "easp/adam.h"

#include <cmath>
#include <stdexcept>

namespace easp {

void adam_step(std::span<Parameter* const> params, AdamState& state, const AdamConfig& cfg,
               int t) {
  if (t < 1) throw std::invalid_argument("adam_step: t must be >= 1");
  if (state.m.empty()) {
    state.m.reserve(params.size());
    state.v.reserve(params.size());
    for (const Parameter* p : params) {
      state.m.emplace_back(p->value.rows, p->value.cols);
      state.v.emplace_back(p->value.rows, p->value.cols);
    }
  }
  if (state.m.size() != params.size()) {
    throw std::invalid_argument("adam_step: state does not match param list");
  }
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  for (size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = *params[pi];
    Matrix& m = state.m[pi];
    Matrix& v = state.v[pi];
    for (size_t i = 0; i < p.value.data.size(); ++i) {
      const double g = p.grad.data[i];
      m.data[i] = cfg.beta1 * m.data[i] + (1.0 - cfg.beta1) * g;
      v.data[i] = cfg.beta2 * v.data[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m.data[i] / bc1;
      const double v_hat = v.data[i] / bc2;
      p.value.data[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
    }
  }
}

}  // namespace easp
