#include "easp/ops.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace easp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->grad.fill(0.0);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols == b.rows, "matmul: shape mismatch " + a.shape_str() + " * " + b.shape_str());
  Matrix c(a.rows, b.cols);
  // ikj order: contiguous inner loops, same per-element accumulation order
  // over k as the naive triple loop.
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = b.row(k);
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
  }
  return t;
}

Matrix affine_forward(const Matrix& x, const Parameter& w, const Parameter& b) {
  require(x.cols == w.value.rows, "affine_forward: x " + x.shape_str() + " does not match W " +
                                      w.value.shape_str());
  require(b.value.rows == 1 && b.value.cols == w.value.cols,
          "affine_forward: bias " + b.value.shape_str() + " does not match W " +
              w.value.shape_str());
  Matrix y = matmul(x, w.value);
  for (int i = 0; i < y.rows; ++i) {
    double* yrow = y.row(i);
    for (int j = 0; j < y.cols; ++j) yrow[j] += b.value.at(0, j);
  }
  return y;
}

Matrix affine_backward(const Matrix& x, Parameter& w, Parameter& b, const Matrix& dy) {
  require(dy.rows == x.rows && dy.cols == w.value.cols,
          "affine_backward: dy " + dy.shape_str() + " does not match x " + x.shape_str() +
              " and W " + w.value.shape_str());
  // w.grad += x^T dy
  for (int i = 0; i < x.rows; ++i) {
    const double* xrow = x.row(i);
    const double* dyrow = dy.row(i);
    for (int k = 0; k < x.cols; ++k) {
      const double xv = xrow[k];
      if (xv == 0.0) continue;
      double* grow = w.grad.row(k);
      for (int j = 0; j < dy.cols; ++j) grow[j] += xv * dyrow[j];
    }
  }
  // b.grad += column sums of dy
  for (int i = 0; i < dy.rows; ++i) {
    const double* dyrow = dy.row(i);
    for (int j = 0; j < dy.cols; ++j) b.grad.at(0, j) += dyrow[j];
  }
  // dx = dy W^T
  Matrix dx(x.rows, x.cols);
  for (int i = 0; i < dy.rows; ++i) {
    const double* dyrow = dy.row(i);
    double* dxrow = dx.row(i);
    for (int j = 0; j < dy.cols; ++j) {
      const double d = dyrow[j];
      if (d == 0.0) continue;
      for (int k = 0; k < x.cols; ++k) dxrow[k] += d * w.value.at(k, j);
    }
  }
  return dx;
}

Matrix relu_forward(const Matrix& x) {
  Matrix y = x;
  for (double& v : y.data) v = std::max(v, 0.0);
  return y;
}

Matrix relu_backward(const Matrix& x, const Matrix& dy) {
  require(x.same_shape(dy), "relu_backward: shape mismatch " + x.shape_str() + " vs " +
                                dy.shape_str());
  Matrix dx(x.rows, x.cols);
  for (size_t i = 0; i < x.data.size(); ++i) dx.data[i] = x.data[i] > 0.0 ? dy.data[i] : 0.0;
  return dx;
}

Matrix softmax_rows(const Matrix& x) {
  Matrix p(x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i) {
    const double* xrow = x.row(i);
    double* prow = p.row(i);
    double mx = xrow[0];
    for (int j = 1; j < x.cols; ++j) mx = std::max(mx, xrow[j]);
    double sum = 0.0;
    for (int j = 0; j < x.cols; ++j) {
      prow[j] = std::exp(xrow[j] - mx);
      sum += prow[j];
    }
    for (int j = 0; j < x.cols; ++j) prow[j] /= sum;
  }
  return p;
}

Matrix softmax_rows_backward(const Matrix& probs, const Matrix& dprobs) {
  require(probs.same_shape(dprobs), "softmax_rows_backward: shape mismatch " +
                                        probs.shape_str() + " vs " + dprobs.shape_str());
  Matrix dx(probs.rows, probs.cols);
  for (int i = 0; i < probs.rows; ++i) {
    const double* prow = probs.row(i);
    const double* drow = dprobs.row(i);
    double dot = 0.0;
    for (int j = 0; j < probs.cols; ++j) dot += drow[j] * prow[j];
    double* dxrow = dx.row(i);
    for (int j = 0; j < probs.cols; ++j) dxrow[j] = prow[j] * (drow[j] - dot);
  }
  return dx;
}

XentResult cross_entropy(const Matrix& probs, std::span<const int> targets) {
  require(static_cast<int>(targets.size()) == probs.rows,
          "cross_entropy: " + std::to_string(targets.size()) + " targets for " +
              probs.shape_str() + " probs");
  XentResult r;
  r.dprobs = Matrix(probs.rows, probs.cols);
  const double inv_n = 1.0 / probs.rows;
  for (int i = 0; i < probs.rows; ++i) {
    const int t = targets[i];
    require(t >= 0 && t < probs.cols,
            "cross_entropy: target " + std::to_string(t) + " out of range for " +
                probs.shape_str() + " probs");
    r.loss += -std::log(probs.at(i, t)) * inv_n;
    r.dprobs.at(i, t) = -inv_n / probs.at(i, t);
  }
  return r;
}

}  // namespace easp
