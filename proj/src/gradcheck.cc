#include "easp/gradcheck.h"

#include <algorithm>
#include <cmath>

namespace easp {

std::vector<Matrix> finite_diff_grad(const std::function<double()>& loss_fn,
                                     std::span<Parameter* const> params, double h) {
  std::vector<Matrix> grads;
  grads.reserve(params.size());
  for (Parameter* p : params) {
    Matrix g(p->value.rows, p->value.cols);
    for (size_t i = 0; i < p->value.data.size(); ++i) {
      const double saved = p->value.data[i];
      p->value.data[i] = saved + h;
      const double up = loss_fn();
      p->value.data[i] = saved - h;
      const double down = loss_fn();
      p->value.data[i] = saved;
      g.data[i] = (up - down) / (2.0 * h);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

bool grads_close(const Matrix& analytic, const Matrix& numeric, double rtol, double atol) {
  if (!analytic.same_shape(numeric)) return false;
  for (size_t i = 0; i < analytic.data.size(); ++i) {
    const double a = analytic.data[i];
    const double n = numeric.data[i];
    if (std::abs(a - n) > atol + rtol * std::max(std::abs(a), std::abs(n))) return false;
  }
  return true;
}

double grads_max_violation(std::span<Parameter* const> params,
                           const std::vector<Matrix>& numeric, double rtol, double atol) {
  double worst = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    const Matrix& a = params[pi]->grad;
    const Matrix& n = numeric[pi];
    for (size_t i = 0; i < a.data.size(); ++i) {
      const double denom = atol + rtol * std::max(std::abs(a.data[i]), std::abs(n.data[i]));
      worst = std::max(worst, std::abs(a.data[i] - n.data[i]) / denom);
    }
  }
  return worst;
}

}  // namespace easp
