#pragma once

#include <span>
#include <vector>

#include "easp/matrix.h"

namespace easp {

inline constexpr int kCtcBlank = 0;

// Frames x vocab log-probability lattice; row logsumexp should be 0 for a
// proper distribution, though the loss is defined for any finite table.
using CtcTable = Matrix;

struct CtcResult {
  double loss = 0.0;  // -log P(target | table); +inf when infeasible
  Matrix grad;        // dloss/dtable entry; all-zero when infeasible
};

// Log-space forward-backward over the blank-interleaved target. Targets
// must use ids in [1, vocab). A target needing more frames than available
// (length + adjacent repeats > T) yields +inf loss and zero gradient.
CtcResult ctc_loss(const CtcTable& log_probs, std::span<const int> target);

// Per-frame argmax (ties to the lower id), collapse adjacent repeats, drop
// blanks.
std::vector<int> ctc_greedy_decode(const CtcTable& log_probs);

}  // namespace easp
