#pragma once

#include <span>
#include <string>
#include <utility>

#include "easp/matrix.h"

namespace easp {

// A trainable tensor with its gradient accumulator. grad always has the
// shape of value and starts (and stays, after zero_grads) all-zero.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, int r, int c) : name(std::move(n)), value(r, c), grad(r, c) {}
};

void zero_grads(std::span<Parameter* const> params);

}  // namespace easp
