#pragma once

#include <span>

#include "easp/matrix.h"
#include "easp/parameter.h"

namespace easp {

// Standard product, f64 accumulation over k in ascending order.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// y = x * W + b, bias (1 x W.cols) broadcast over rows.
Matrix affine_forward(const Matrix& x, const Parameter& w, const Parameter& b);
// Accumulates into w.grad and b.grad, returns dL/dx.
Matrix affine_backward(const Matrix& x, Parameter& w, Parameter& b, const Matrix& dy);

Matrix relu_forward(const Matrix& x);
Matrix relu_backward(const Matrix& x, const Matrix& dy);

// Row-wise softmax with max subtraction for stability.
Matrix softmax_rows(const Matrix& x);
// dL/dx from probs = softmax_rows(x) and dL/dprobs:
// dx = p .* (dp - (dp . p)) per row.
Matrix softmax_rows_backward(const Matrix& probs, const Matrix& dprobs);

struct XentResult {
  double loss = 0.0;   // mean of -log probs[r][targets[r]] over rows
  Matrix dprobs;       // gradient w.r.t. probs
};
XentResult cross_entropy(const Matrix& probs, std::span<const int> targets);

}  // namespace easp
