#pragma once

#include <span>
#include <vector>

#include "easp/parameter.h"

namespace easp {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment buffers, aligned with the param list they were first
// used with. Allocated lazily on the first step.
struct AdamState {
  std::vector<Matrix> m;
  std::vector<Matrix> v;
};

// Standard Adam update with bias correction; t counts from 1.
// Does not clear gradients.
void adam_step(std::span<Parameter* const> params, AdamState& state, const AdamConfig& cfg,
               int t);

}  // namespace easp
