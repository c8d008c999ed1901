#pragma once

#include <functional>
#include <span>
#include <vector>

#include "easp/parameter.h"

namespace easp {

// Central finite differences (f(p+h) - f(p-h)) / 2h for every scalar entry
// of every parameter. loss_fn must be pure in the parameter values; the
// values are restored exactly afterwards.
std::vector<Matrix> finite_diff_grad(const std::function<double()>& loss_fn,
                                     std::span<Parameter* const> params, double h = 1e-5);

// |a - n| <= atol + rtol * max(|a|, |n|) for every entry.
bool grads_close(const Matrix& analytic, const Matrix& numeric, double rtol = 1e-6,
                 double atol = 1e-8);

// Largest violation ratio |a-n| / (atol + rtol*max(|a|,|n|)) over all entries
// of all pairs; <= 1 means every entry passes.
double grads_max_violation(std::span<Parameter* const> params,
                           const std::vector<Matrix>& numeric, double rtol = 1e-6,
                           double atol = 1e-8);

}  // namespace easp
