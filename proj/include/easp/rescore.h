#pragma once

#include <functional>
#include <span>
#include <vector>

namespace easp {

struct RescoreConfig {
  double lambda = 0.5;  // weight on the CTC score, in [0, 1]
};

struct Candidate {
  std::vector<int> tokens;
  double ctc_score = 0.0;  // log-domain
};

// Teacher-forced log-probability of a token sequence.
using SequenceScorer = std::function<double(std::span<const int>)>;

// argmax of lambda*ctc + (1-lambda)*decoder over candidates; ties go to the
// lower index. Throws std::invalid_argument on an empty candidate list.
int rescore_index(std::span<const Candidate> candidates, const SequenceScorer& decoder,
                  const RescoreConfig& cfg);
std::vector<int> rescore(std::span<const Candidate> candidates, const SequenceScorer& decoder,
                         const RescoreConfig& cfg);

}  // namespace easp
