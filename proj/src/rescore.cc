#include "easp/rescore.h"

#include <stdexcept>

namespace easp {

int rescore_index(std::span<const Candidate> candidates, const SequenceScorer& decoder,
                  const RescoreConfig& cfg) {
  if (candidates.empty()) throw std::invalid_argument("rescore: no candidates");
  if (cfg.lambda < 0.0 || cfg.lambda > 1.0) {
    throw std::invalid_argument("rescore: lambda must be in [0, 1]");
  }
  int best = 0;
  double best_score = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double score = cfg.lambda * candidates[i].ctc_score +
                         (1.0 - cfg.lambda) * decoder(candidates[i].tokens);
    if (i == 0 || score > best_score) {
      best = static_cast<int>(i);
      best_score = score;
    }
  }
  return best;
}

std::vector<int> rescore(std::span<const Candidate> candidates, const SequenceScorer& decoder,
                         const RescoreConfig& cfg) {
  return candidates[rescore_index(candidates, decoder, cfg)].tokens;
}

}  // namespace easp
