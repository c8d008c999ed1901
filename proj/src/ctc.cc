#include "easp/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace easp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double mx = std::max(a, b);
  return mx + std::log1p(std::exp(std::min(a, b) - mx));
}

}  // namespace

CtcResult ctc_loss(const CtcTable& log_probs, std::span<const int> target) {
  const int T = log_probs.rows;
  const int V = log_probs.cols;
  const int L = static_cast<int>(target.size());
  for (int t : target) {
    if (t <= 0 || t >= V) {
      throw std::invalid_argument("ctc_loss: target id " + std::to_string(t) +
                                  " outside [1, " + std::to_string(V) + ")");
    }
  }

  if (T < 1 || V < 2) {
    throw std::invalid_argument("ctc_loss: table must have at least 1 frame and 2 symbols");
  }

  CtcResult result;
  result.grad = Matrix(T, V);

  int repeats = 0;
  for (int i = 1; i < L; ++i) {
    if (target[i] == target[i - 1]) ++repeats;
  }
  if (L + repeats > T) {
    result.loss = std::numeric_limits<double>::infinity();
    return result;
  }

  // Augmented label: blank, t0, blank, t1, ..., blank.
  const int S = 2 * L + 1;
  auto label = [&](int s) { return s % 2 == 0 ? kCtcBlank : target[s / 2]; };

  Matrix alpha(T, S);
  Matrix beta(T, S);
  alpha.fill(kNegInf);
  beta.fill(kNegInf);

  alpha.at(0, 0) = log_probs.at(0, label(0));
  if (S > 1) alpha.at(0, 1) = log_probs.at(0, label(1));
  for (int t = 1; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      double a = alpha.at(t - 1, s);
      if (s >= 1) a = log_add(a, alpha.at(t - 1, s - 1));
      if (s >= 2 && label(s) != kCtcBlank && label(s) != label(s - 2)) {
        a = log_add(a, alpha.at(t - 1, s - 2));
      }
      if (a != kNegInf) alpha.at(t, s) = a + log_probs.at(t, label(s));
    }
  }

  beta.at(T - 1, S - 1) = log_probs.at(T - 1, label(S - 1));
  if (S > 1) beta.at(T - 1, S - 2) = log_probs.at(T - 1, label(S - 2));
  for (int t = T - 2; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      double b = beta.at(t + 1, s);
      if (s + 1 < S) b = log_add(b, beta.at(t + 1, s + 1));
      if (s + 2 < S && label(s) != kCtcBlank && label(s) != label(s + 2)) {
        b = log_add(b, beta.at(t + 1, s + 2));
      }
      if (b != kNegInf) beta.at(t, s) = b + log_probs.at(t, label(s));
    }
  }

  double log_p = kNegInf;
  log_p = log_add(alpha.at(T - 1, S - 1), S > 1 ? alpha.at(T - 1, S - 2) : kNegInf);
  result.loss = -log_p;

  // alpha and beta both include the emission at t, so the state posterior is
  // alpha + beta - emission; d(-logP)/dlogp_t(v) = -sum_{s: label(s)=v}
  // exp(posterior - logP).
  for (int t = 0; t < T; ++t) {
    for (int s = 0; s < S; ++s) {
      const double a = alpha.at(t, s);
      const double b = beta.at(t, s);
      if (a == kNegInf || b == kNegInf) continue;
      const int v = label(s);
      result.grad.at(t, v) -= std::exp(a + b - log_probs.at(t, v) - log_p);
    }
  }
  return result;
}

std::vector<int> ctc_greedy_decode(const CtcTable& log_probs) {
  std::vector<int> out;
  int prev = kCtcBlank;
  for (int t = 0; t < log_probs.rows; ++t) {
    int best = 0;
    for (int v = 1; v < log_probs.cols; ++v) {
      if (log_probs.at(t, v) > log_probs.at(t, best)) best = v;
    }
    if (best != kCtcBlank && best != prev) out.push_back(best);
    prev = best;
  }
  return out;
}

}  // namespace easp
